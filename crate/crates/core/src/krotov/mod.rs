// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Krotov optimizers: the standard closed-system variant and the
//! disorder-dressed variant whose update includes the derivative of the
//! DDME memory term.
//!
//! Both use the first-order update `Δf_{m,(k)} = (S_{m,(k)}/λ_m)·D_{m,(k)}`,
//! sweeping `k = 1..N` sequentially within each iteration, and stop once
//! `J_T = 1 − Tr(ρ_targ ρ̄(T)) ≤ J_tol` or after `i_max` iterations.

mod ddme;
mod gradient;
mod se;
mod sweep;

pub use ddme::ddme_krotov;
pub use gradient::{ddme_gradient, ddme_gradient_complex};
pub use se::se_krotov;
pub use sweep::{run_correlation_sweep, SweepSeries};

use crate::control::{PulseSet, UpdateShape};
use crate::propagation::ddme_propagate;
use crate::quantum::Operator;
use crate::{ControlProblem, Error, Result};

/// Optimizer parameters shared by both Krotov variants.
#[derive(Debug, Clone, PartialEq)]
pub struct KrotovConfig {
    /// Inverse step sizes `λ_m > 0`; smaller means larger updates.
    pub lambdas: Vec<f64>,
    pub shapes: Vec<UpdateShape>,
    /// Absolute tolerance on `J_T`.
    pub j_tol: f64,
    pub max_iterations: usize,
}

impl KrotovConfig {
    pub fn new(
        lambdas: Vec<f64>,
        shapes: Vec<UpdateShape>,
        j_tol: f64,
        max_iterations: usize,
    ) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() != shapes.len() {
            return Err(Error::invalid(format!(
                "need one step size per update shape, got {} and {}",
                lambdas.len(),
                shapes.len()
            )));
        }
        if let Some(bad) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::invalid(format!("lambda must be positive, got {bad}")));
        }
        if !(j_tol > 0.0 && j_tol < 1.0) {
            return Err(Error::invalid(format!("J_tol must lie in (0, 1), got {j_tol}")));
        }
        if max_iterations == 0 {
            return Err(Error::invalid("i_max must be at least 1"));
        }
        Ok(Self {
            lambdas,
            shapes,
            j_tol,
            max_iterations,
        })
    }

    fn validate_for(&self, problem: &ControlProblem) -> Result<()> {
        let m = problem.control_count();
        if self.lambdas.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: self.lambdas.len(),
            });
        }
        if let Some(shape) = self.shapes.iter().find(|s| s.len() != problem.grid.steps()) {
            return Err(Error::DimensionMismatch {
                expected: problem.grid.steps(),
                found: shape.len(),
            });
        }
        Ok(())
    }
}

/// History of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    /// `J_T` before optimization followed by one entry per iteration.
    pub costs: Vec<f64>,
    pub pulses: PulseSet,
    /// Pulse iterates, starting with the guess.
    pub history: Vec<PulseSet>,
    pub converged: bool,
    pub iterations: usize,
}

impl OptimizationTrace {
    pub fn final_cost(&self) -> f64 {
        *self.costs.last().expect("trace always holds the initial cost")
    }

    /// Iterations after which `J_T` went up.
    pub fn cost_increases(&self) -> Vec<usize> {
        self.costs
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0])
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Termination policy; fixed-length runs ignore the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum StopRule {
    Tolerance,
    FixedIterations,
}

/// `J_T = 1 − Tr(ρ_targ ρ̄(T))` with `ρ̄(T)` from the DDME.
pub fn cost_jt(problem: &ControlProblem, pulses: &PulseSet) -> Result<f64> {
    let traj = ddme_propagate(problem, pulses)?;
    Ok(overlap_cost(problem.target.op(), traj.final_state()))
}

pub(crate) fn overlap_cost(target: &Operator, rho: &Operator) -> f64 {
    1.0 - target.trace_product(rho).re
}
