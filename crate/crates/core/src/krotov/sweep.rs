// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use super::{ddme, KrotovConfig, StopRule};
use crate::control::PulseSet;
use crate::{ControlProblem, Error, Result};

/// `J_T` per iteration of a fixed-length DDME-Krotov run at one `t_corr`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub t_corr: f64,
    /// Initial cost followed by one entry per iteration.
    pub costs: Vec<f64>,
}

/// Runs DDME-Krotov for exactly `iterations` iterations at each correlation
/// time, keeping the kernel amplitude fixed and ignoring `J_tol`.
pub fn run_correlation_sweep(
    problem: &ControlProblem,
    guess: &PulseSet,
    config: &KrotovConfig,
    t_corrs: &[f64],
    iterations: usize,
) -> Result<Vec<SweepSeries>> {
    if t_corrs.is_empty() {
        return Err(Error::invalid("sweep needs at least one correlation time"));
    }
    let fixed = KrotovConfig {
        max_iterations: iterations,
        ..config.clone()
    };
    t_corrs
        .par_iter()
        .map(|&t_corr| {
            let kernel = problem.kernel.with_correlation_time(t_corr)?;
            let trace = ddme::run(
                &problem.with_kernel(kernel),
                guess,
                &fixed,
                StopRule::FixedIterations,
            )?;
            Ok(SweepSeries {
                t_corr,
                costs: trace.costs,
            })
        })
        .collect()
}
