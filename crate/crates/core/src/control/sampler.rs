// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::grid::{PulseSet, TimeGrid};
use super::kernel::CorrelationKernel;
use crate::{Error, Result};

/// Relative diagonal jitter added before the Cholesky factorization; the
/// quasistatic covariance is numerically close to rank one.
pub const COVARIANCE_JITTER: f64 = 1e-12;

/// Draws zero-mean Gaussian pulse perturbations with the kernel's midpoint
/// covariance, `g = L z` with `L Lᵀ = C + jitter·I` and `z` standard normal.
#[derive(Debug, Clone)]
pub struct DisorderSampler {
    factor: Option<DMatrix<f64>>,
    count: usize,
    steps: usize,
}

impl DisorderSampler {
    pub fn new(kernel: &CorrelationKernel, grid: &TimeGrid, count: usize) -> Result<Self> {
        let steps = grid.steps();
        if kernel.is_zero() {
            return Ok(Self {
                factor: None,
                count,
                steps,
            });
        }
        let cov = kernel.midpoint_covariance(grid, count)?;
        let scale = cov.diagonal().iter().cloned().fold(0.0, f64::max);
        let mut jittered = cov.clone();
        for i in 0..jittered.nrows() {
            jittered[(i, i)] += COVARIANCE_JITTER * scale;
        }
        match jittered.cholesky() {
            Some(chol) => Ok(Self {
                factor: Some(chol.unpack()),
                count,
                steps,
            }),
            None => {
                let min_eigenvalue = cov
                    .symmetric_eigen()
                    .eigenvalues
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                Err(Error::NotPositiveSemidefinite { min_eigenvalue })
            }
        }
    }

    /// One realization. Consumes exactly `M·N` standard normals from `rng`
    /// (none for a zero kernel).
    pub fn draw(&self, rng: &mut impl Rng) -> PulseSet {
        let n = self.count * self.steps;
        let Some(factor) = &self.factor else {
            return PulseSet::zeros(self.count, self.steps);
        };
        let z = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let g = factor * z;
        let values = (0..self.count)
            .map(|m| g.as_slice()[m * self.steps..(m + 1) * self.steps].to_vec())
            .collect();
        PulseSet::new(values).expect("finite Gaussian draw")
    }
}

/// `count` independent perturbation realizations from a ChaCha8 stream seeded
/// with `seed`, drawn in order. Realization `r` depends only on `(seed, r)`,
/// so splitting work by index ranges keeps results identical.
pub fn sample_perturbations(
    kernel: &CorrelationKernel,
    grid: &TimeGrid,
    pulse_count: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<PulseSet>> {
    let sampler = DisorderSampler::new(kernel, grid, pulse_count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sampler.draw(&mut rng)).collect())
}
