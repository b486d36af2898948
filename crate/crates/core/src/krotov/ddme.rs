// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use super::gradient::ddme_gradient;
use super::{overlap_cost, KrotovConfig, OptimizationTrace, StopRule};
use crate::control::PulseSet;
use crate::propagation::{propagate_cache, PropagatorCache};
use crate::quantum::{Operator, Superoperator};
use crate::{ControlProblem, Error, Result};

/// DDME-Krotov: maximizes `Tr(ρ_targ ρ̄(T))` of the disorder-averaged state.
///
/// Within an iteration the samples are updated in order `k = 1..N`. Before
/// each update, costates `χ_[j]` (from `χ_[N] = ρ_targ`) and states `ρ̄_[j]`
/// for `j ≥ k` are recomputed with the partially updated pulses, since the
/// memory term couples every later step to the sample being changed.
pub fn ddme_krotov(
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
    let mut cache = PropagatorCache::new(&problem.family, &problem.grid, &problem.kernel, guess)?;
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
        for k in 1..=steps {
            let supers = step_superoperators(&cache, k - 1..steps)?;
            let later = |j: usize| &supers[j - k];
            for j in (k..steps).rev() {
                costates[j] = later(j + 1).adjoint().apply(&costates[j + 1])?;
            }
            for j in k..=steps {
                states[j] = later(j).apply(&states[j - 1])?;
            }
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

/// `𝒱_(i+1)` for every midpoint `i` in `range`, in order.
pub(crate) fn step_superoperators(
    cache: &PropagatorCache,
    range: std::ops::Range<usize>,
) -> Result<Vec<Superoperator>> {
    range
        .into_par_iter()
        .map(|i| cache.step_superoperator(i))
        .collect()
}

/// `f_{m,(k)} + (S_{m,(k)}/λ_m) D_{m,(k)}` for all pulses at midpoint `i`.
pub(crate) fn updated_amplitudes(
    cache: &PropagatorCache,
    states: &[Operator],
    costates: &[Operator],
    config: &KrotovConfig,
    i: usize,
    count: usize,
) -> Result<Vec<f64>> {
    (0..count)
        .map(|m| {
            let d = ddme_gradient(cache, states, costates, m, i)?;
            let step = config.shapes[m].get(i) / config.lambdas[m] * d;
            Ok(cache.pulses().get(m, i) + step)
        })
        .collect()
}

pub(crate) fn checked_cost(target: &Operator, rho: &Operator) -> Result<f64> {
    let cost = overlap_cost(target, rho);
    if cost.is_finite() {
        Ok(cost)
    } else {
        Err(Error::NonFinite("terminal cost"))
    }
}
