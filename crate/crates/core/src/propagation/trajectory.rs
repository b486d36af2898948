// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::control::TimeGrid;
use crate::quantum::{bloch_vector, overlap_fidelity, purity, trace_distance, DensityMatrix, Operator};
use crate::{Error, Result};

/// States on every node of the time grid, with purity and target fidelity.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TimeGrid,
    states: Vec<Operator>,
    purity: Vec<f64>,
    fidelity: Vec<f64>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, states: Vec<Operator>, target: &DensityMatrix) -> Result<Self> {
        if states.len() != grid.steps() + 1 {
            return Err(Error::DimensionMismatch {
                expected: grid.steps() + 1,
                found: states.len(),
            });
        }
        let purity = states.iter().map(purity).collect();
        let fidelity = states
            .iter()
            .map(|s| overlap_fidelity(target.op(), s))
            .collect();
        Ok(Self {
            grid,
            states,
            purity,
            fidelity,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn states(&self) -> &[Operator] {
        &self.states
    }

    pub fn state(&self, s: usize) -> &Operator {
        &self.states[s]
    }

    pub fn final_state(&self) -> &Operator {
        self.states.last().expect("trajectory has at least one node")
    }

    pub fn purity(&self) -> &[f64] {
        &self.purity
    }

    /// `√Tr(ρ_targ ρ̄_[s])`, the fidelity with the pure target.
    pub fn fidelity(&self) -> &[f64] {
        &self.fidelity
    }

    pub fn final_purity(&self) -> f64 {
        *self.purity.last().unwrap()
    }

    pub fn final_fidelity(&self) -> f64 {
        *self.fidelity.last().unwrap()
    }

    pub fn min_purity(&self) -> f64 {
        self.purity.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Bloch coordinates per node; qubits only.
    pub fn bloch(&self) -> Result<Vec<[f64; 3]>> {
        self.states.iter().map(bloch_vector).collect()
    }

    /// Smallest eigenvalue over all nodes. The perturbative DDME may produce
    /// slightly negative values; they are reported here, not clipped.
    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.eigenvalues_hermitian()[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_trace_error(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.trace() - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// Largest node-wise trace distance to another trajectory on the same grid.
    pub fn max_trace_distance(&self, other: &Trajectory) -> Result<f64> {
        if self.states.len() != other.states.len() {
            return Err(Error::DimensionMismatch {
                expected: self.states.len(),
                found: other.states.len(),
            });
        }
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| trace_distance(a, b))
            .try_fold(0.0, |acc, d| d.map(|d| f64::max(acc, d)))
    }
}
