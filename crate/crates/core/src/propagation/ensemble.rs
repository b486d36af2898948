// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use super::ddme::unitary_states;
use super::trajectory::Trajectory;
use crate::control::{sample_perturbations, PulseSet};
use crate::quantum::Operator;
use crate::{ControlProblem, Error, Result};

/// Realizations are summed in fixed-size chunks, in index order within each
/// chunk and then across chunks, so results do not depend on thread count.
const CHUNK: usize = 64;

/// Closed-system trajectory under the perturbed pulses `f + g`, with `g`
/// piecewise constant on each midpoint interval.
pub fn realization_trajectory(
    problem: &ControlProblem,
    pulses: &PulseSet,
    perturbation: &PulseSet,
) -> Result<Trajectory> {
    let perturbed = pulses.plus(perturbation)?;
    let states = unitary_states(problem, &perturbed)?;
    Trajectory::new(problem.grid, states, &problem.target)
}

/// Brute-force disorder average over `count` sampled realizations.
pub fn ensemble_average(
    problem: &ControlProblem,
    pulses: &PulseSet,
    count: usize,
    seed: u64,
) -> Result<Trajectory> {
    if count == 0 {
        return Err(Error::invalid("ensemble needs at least one realization"));
    }
    pulses.ensure_shape(problem.control_count(), problem.grid.steps())?;
    let draws = sample_perturbations(
        &problem.kernel,
        &problem.grid,
        problem.control_count(),
        count,
        seed,
    )?;
    let partial: Vec<Vec<Operator>> = draws
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut sum: Option<Vec<Operator>> = None;
            for g in chunk {
                let states = unitary_states(problem, &pulses.plus(g)?)?;
                match sum.as_mut() {
                    None => sum = Some(states),
                    Some(acc) => acc.iter_mut().zip(&states).for_each(|(a, s)| *a += s),
                }
            }
            Ok(sum.expect("chunks are non-empty"))
        })
        .collect::<Result<_>>()?;
    let mut iter = partial.into_iter();
    let mut total = iter.next().expect("at least one chunk");
    for chunk in iter {
        total.iter_mut().zip(&chunk).for_each(|(a, s)| *a += s);
    }
    let inv = 1.0 / count as f64;
    let states = total.iter().map(|s| s.scale_real(inv)).collect();
    Trajectory::new(problem.grid, states, &problem.target)
}
