// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use super::ddme::{checked_cost, step_superoperators, updated_amplitudes};
use super::{KrotovConfig, OptimizationTrace, StopRule};
use crate::control::{CorrelationKernel, PulseSet};
use crate::propagation::{propagate_cache, PropagatorCache};
use crate::{ControlProblem, Result};

/// Standard Krotov for the closed system: the problem's kernel is ignored.
///
/// Costates are propagated once per iteration with the old pulses; the
/// forward sweep then updates each sample with
/// `D = Tr(χ_[k] (−i)[H_m, ρ_[k]])`.
pub fn se_krotov(
    problem: &ControlProblem,
    guess: &PulseSet,
    config: &KrotovConfig,
) -> Result<OptimizationTrace> {
    run(problem, guess, config, StopRule::Tolerance)
}

pub(crate) fn run(
    problem: &ControlProblem,
    guess: &PulseSet,
    config: &KrotovConfig,
    stop: StopRule,
) -> Result<OptimizationTrace> {
    config.validate_for(problem)?;
    let zero = CorrelationKernel::zero();
    let mut cache = PropagatorCache::new(&problem.family, &problem.grid, &zero, guess)?;
    let target = problem.target.op();
    let steps = problem.grid.steps();
    let count = problem.control_count();

    let mut states = propagate_cache(&cache, problem.rho0.op())?;
    let mut costates = vec![target.clone(); steps + 1];
    let mut cost = checked_cost(target, &states[steps])?;
    let mut costs = vec![cost];
    let mut history = vec![guess.clone()];

    let mut iterations = 0;
    while iterations < config.max_iterations
        && !(stop == StopRule::Tolerance && cost <= config.j_tol)
    {
        let supers = step_superoperators(&cache, 0..steps)?;
        for j in (0..steps).rev() {
            costates[j] = supers[j].adjoint().apply(&costates[j + 1])?;
        }
        for k in 1..=steps {
            states[k] = supers[k - 1].apply(&states[k - 1])?;
            let amplitudes = updated_amplitudes(&cache, &states, &costates, config, k - 1, count)?;
            cache.set_step(k - 1, &amplitudes)?;
            states[k] = cache.step_superoperator(k - 1)?.apply(&states[k - 1])?;
        }
        iterations += 1;
        cost = checked_cost(target, &states[steps])?;
        costs.push(cost);
        history.push(cache.pulses().clone());
    }

    Ok(OptimizationTrace {
        costs,
        pulses: cache.pulses().clone(),
        history,
        converged: cost <= config.j_tol,
        iterations,
    })
}
