// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use super::grid::TimeGrid;
use crate::{Error, Result};

/// `C₀·exp(−(t − t′)²/t_corr²)`.
pub fn gaussian_kernel(t: f64, t_prime: f64, c0: f64, t_corr: f64) -> Result<f64> {
    if !(t_corr.is_finite() && t_corr > 0.0) {
        return Err(Error::invalid(format!(
            "correlation time must be positive, got {t_corr}; use a white-noise kernel for zero correlation time"
        )));
    }
    if !(c0.is_finite() && c0 >= 0.0) {
        return Err(Error::invalid(format!("C0 must be non-negative, got {c0}")));
    }
    let tau = (t - t_prime) / t_corr;
    Ok(c0 * (-tau * tau).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind {
    /// No disorder.
    Zero,
    /// `C_{m,n}(t, t′) = R_{mn}·C₀·exp(−(t − t′)²/t_corr²)`.
    StationaryGaussian { c0: f64, t_corr: f64 },
    /// `C_{m,n}(t, t′) = R_{mn}·α·δ(t − t′)`: the Markovian limit.
    WhiteNoise { alpha: f64 },
    /// Explicit covariance on the midpoint grid, `(M·N)×(M·N)` with row index
    /// `m·N + i`. Carries its own cross-pulse structure.
    Tabulated { values: DMatrix<f64> },
}

/// Second-order statistics `C_{m,n}(t, t′)` of the pulse perturbations.
///
/// The cross-pulse matrix `R` defaults to the identity (uncorrelated pulses).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationKernel {
    kind: KernelKind,
    cross: Option<DMatrix<f64>>,
}

impl CorrelationKernel {
    pub fn zero() -> Self {
        Self {
            kind: KernelKind::Zero,
            cross: None,
        }
    }

    pub fn gaussian(c0: f64, t_corr: f64) -> Result<Self> {
        gaussian_kernel(0.0, 0.0, c0, t_corr)?;
        Ok(Self {
            kind: KernelKind::StationaryGaussian { c0, t_corr },
            cross: None,
        })
    }

    pub fn white_noise(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::invalid(format!(
                "white-noise strength must be non-negative, got {alpha}"
            )));
        }
        Ok(Self {
            kind: KernelKind::WhiteNoise { alpha },
            cross: None,
        })
    }

    pub fn tabulated(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != values.ncols() || values.nrows() == 0 {
            return Err(Error::invalid("tabulated kernel must be a non-empty square matrix"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tabulated kernel"));
        }
        if (&values - values.transpose()).amax() > 0.0 {
            return Err(Error::invalid("tabulated kernel must be symmetric"));
        }
        if values.diagonal().iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("tabulated kernel has negative variances"));
        }
        Ok(Self {
            kind: KernelKind::Tabulated { values },
            cross: None,
        })
    }

    /// Replaces the cross-pulse correlation matrix `R`.
    pub fn with_cross(mut self, cross: DMatrix<f64>) -> Result<Self> {
        if matches!(self.kind, KernelKind::Tabulated { .. }) {
            return Err(Error::invalid(
                "tabulated kernels carry their own cross-pulse correlations",
            ));
        }
        if cross.nrows() != cross.ncols() || cross.nrows() == 0 {
            return Err(Error::invalid("cross-correlation matrix must be square"));
        }
        if cross.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("cross-correlation matrix"));
        }
        if (&cross - cross.transpose()).amax() > 0.0 {
            return Err(Error::invalid("cross-correlation matrix must be symmetric"));
        }
        if cross.diagonal().iter().any(|&v| v < 0.0) {
            return Err(Error::invalid("cross-correlation matrix has negative diagonal"));
        }
        self.cross = Some(cross);
        Ok(self)
    }

    pub fn kind(&self) -> &KernelKind {
        &self.kind
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            KernelKind::Zero => true,
            KernelKind::StationaryGaussian { c0, .. } => *c0 == 0.0,
            KernelKind::WhiteNoise { alpha } => *alpha == 0.0,
            KernelKind::Tabulated { values } => values.iter().all(|&v| v == 0.0),
        }
    }

    /// Copy of this kernel with a different Gaussian correlation time.
    pub fn with_correlation_time(&self, t_corr: f64) -> Result<Self> {
        match &self.kind {
            KernelKind::StationaryGaussian { c0, .. } => Ok(Self {
                kind: KernelKind::StationaryGaussian {
                    c0: *c0,
                    t_corr: {
                        gaussian_kernel(0.0, 0.0, *c0, t_corr)?;
                        t_corr
                    },
                },
                cross: self.cross.clone(),
            }),
            _ => Err(Error::invalid(
                "correlation time can only be changed on a stationary Gaussian kernel",
            )),
        }
    }

    /// Cross-pulse weight `R_{mn}`.
    pub fn cross(&self, m: usize, n: usize) -> f64 {
        match &self.cross {
            Some(r) => r[(m, n)],
            None => {
                if m == n {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn check_pulse_count(&self, grid: &TimeGrid, count: usize) -> Result<()> {
        if let Some(r) = &self.cross {
            if r.nrows() != count {
                return Err(Error::DimensionMismatch {
                    expected: count,
                    found: r.nrows(),
                });
            }
        }
        if let KernelKind::Tabulated { values } = &self.kind {
            let n = count * grid.steps();
            if values.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: values.nrows(),
                });
            }
        }
        Ok(())
    }

    /// Evaluates the kernel on (node, midpoint) pairs for the memory integral.
    pub fn node_midpoint_table(&self, grid: &TimeGrid, count: usize) -> Result<KernelTable> {
        self.check_pulse_count(grid, count)?;
        let steps = grid.steps();
        let mut weights = vec![0.0; count * count * (steps + 1) * steps];
        let mut local = vec![0.0; count * count];
        let mut memory = false;
        let index = |n1: usize, n2: usize, j: usize, l: usize| {
            ((n1 * count + n2) * (steps + 1) + j) * steps + l
        };
        match &self.kind {
            KernelKind::Zero => {}
            KernelKind::StationaryGaussian { c0, t_corr } => {
                memory = *c0 != 0.0;
                for n1 in 0..count {
                    for n2 in 0..count {
                        let r = self.cross(n1, n2);
                        if r == 0.0 {
                            continue;
                        }
                        for j in 0..=steps {
                            for l in 0..steps {
                                weights[index(n1, n2, j, l)] = r * gaussian_kernel(
                                    grid.node(j),
                                    grid.midpoint(l),
                                    *c0,
                                    *t_corr,
                                )?;
                            }
                        }
                    }
                }
            }
            KernelKind::WhiteNoise { alpha } => {
                // ∫₀ᵗ α δ(t − t′) H̃(t, t′) dt′ picks up half the delta at
                // the upper limit, where H̃(t, t) = H_n.
                for n1 in 0..count {
                    for n2 in 0..count {
                        local[n1 * count + n2] = 0.5 * alpha * self.cross(n1, n2);
                    }
                }
            }
            KernelKind::Tabulated { values } => {
                memory = values.iter().any(|&v| v != 0.0);
                // Node t_j sits halfway between midpoints j−1 and j; the
                // first and last nodes take the nearest midpoint row.
                for n1 in 0..count {
                    for n2 in 0..count {
                        for j in 0..=steps {
                            let below = j.saturating_sub(1).min(steps - 1);
                            let above = j.min(steps - 1);
                            for l in 0..steps {
                                let col = n2 * steps + l;
                                weights[index(n1, n2, j, l)] = 0.5
                                    * (values[(n1 * steps + below, col)]
                                        + values[(n1 * steps + above, col)]);
                            }
                        }
                    }
                }
            }
        }
        Ok(KernelTable {
            count,
            steps,
            weights,
            local,
            memory,
        })
    }

    /// Covariance of the perturbations on the midpoint grid, row index
    /// `m·N + i`.
    pub fn midpoint_covariance(&self, grid: &TimeGrid, count: usize) -> Result<DMatrix<f64>> {
        self.check_pulse_count(grid, count)?;
        let steps = grid.steps();
        let n = count * steps;
        let cov = match &self.kind {
            KernelKind::Zero => DMatrix::zeros(n, n),
            KernelKind::StationaryGaussian { c0, t_corr } => {
                let mut cov = DMatrix::zeros(n, n);
                for m in 0..count {
                    for k in 0..count {
                        let r = self.cross(m, k);
                        for i in 0..steps {
                            for l in 0..steps {
                                cov[(m * steps + i, k * steps + l)] = r * gaussian_kernel(
                                    grid.midpoint(i),
                                    grid.midpoint(l),
                                    *c0,
                                    *t_corr,
                                )?;
                            }
                        }
                    }
                }
                cov
            }
            KernelKind::WhiteNoise { alpha } => {
                // Discretized delta: variance α/Δt per midpoint interval.
                let mut cov = DMatrix::zeros(n, n);
                for m in 0..count {
                    for k in 0..count {
                        for i in 0..steps {
                            cov[(m * steps + i, k * steps + i)] =
                                self.cross(m, k) * alpha / grid.dt();
                        }
                    }
                }
                cov
            }
            KernelKind::Tabulated { values } => values.clone(),
        };
        Ok(cov)
    }
}

/// Kernel samples `C_{n₁,n₂}(t_j, t̃_l)` for nodes `j = 0..=N` and midpoints
/// `l = 0..N`, plus the equal-time contribution of a white-noise kernel.
#[derive(Debug, Clone)]
pub struct KernelTable {
    count: usize,
    steps: usize,
    weights: Vec<f64>,
    local: Vec<f64>,
    memory: bool,
}

impl KernelTable {
    pub fn weight(&self, n1: usize, n2: usize, j: usize, l: usize) -> f64 {
        self.weights[((n1 * self.count + n2) * (self.steps + 1) + j) * self.steps + l]
    }

    /// Row `C_{n₁,n₂}(t_j, t̃_·)` over all midpoints.
    pub fn row(&self, n1: usize, n2: usize, j: usize) -> &[f64] {
        let start = ((n1 * self.count + n2) * (self.steps + 1) + j) * self.steps;
        &self.weights[start..start + self.steps]
    }

    /// Coefficient of `H_{n₂}` in `η_{n₁,n₂}` from a white-noise kernel.
    pub fn local(&self, n1: usize, n2: usize) -> f64 {
        self.local[n1 * self.count + n2]
    }

    /// Whether the kernel has finite-time memory (non-zero weights).
    pub fn has_memory(&self) -> bool {
        self.memory
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_kernel_examples() {
        assert_eq!(gaussian_kernel(3.0, 3.0, 0.01, 100.0).unwrap(), 0.01);
        let v = gaussian_kernel(1.0, 3.5, 0.2, 2.5).unwrap();
        assert!((v - 0.2 / std::f64::consts::E).abs() < 1e-16);
        assert_eq!(gaussian_kernel(0.0, 7.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(gaussian_kernel(0.0, 1.0, 0.01, 0.0).is_err());
        assert!(gaussian_kernel(0.0, 1.0, -0.01, 1.0).is_err());
    }

    #[test]
    fn gaussian_kernel_is_symmetric() {
        for (t, s) in [(0.1, 4.2), (9.9, 0.3), (5.0, 5.5)] {
            assert_eq!(
                gaussian_kernel(t, s, 0.03, 1.7).unwrap(),
                gaussian_kernel(s, t, 0.03, 1.7).unwrap()
            );
        }
    }

    #[test]
    fn quasistatic_covariance_lower_bound() {
        let grid = TimeGrid::new(10.0, 100).unwrap();
        let kernel = CorrelationKernel::gaussian(0.01, 100.0).unwrap();
        let cov = kernel.midpoint_covariance(&grid, 1).unwrap();
        let min = cov.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(min >= 0.01 * (-0.01f64).exp());
        assert!((&cov - cov.transpose()).amax() == 0.0);
    }

    #[test]
    fn cross_correlations_and_symmetry() {
        let grid = TimeGrid::new(2.0, 8).unwrap();
        let cross = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]);
        let kernel = CorrelationKernel::gaussian(0.02, 0.7)
            .unwrap()
            .with_cross(cross)
            .unwrap();
        let cov = kernel.midpoint_covariance(&grid, 2).unwrap();
        assert_eq!((&cov - cov.transpose()).amax(), 0.0);
        assert!(kernel.midpoint_covariance(&grid, 3).is_err());
        let table = kernel.node_midpoint_table(&grid, 2).unwrap();
        let expected = 0.3 * gaussian_kernel(grid.node(3), grid.midpoint(5), 0.02, 0.7).unwrap();
        assert_eq!(table.weight(0, 1, 3, 5), expected);
        assert_eq!(table.weight(1, 0, 3, 5), expected);
    }

    #[test]
    fn asymmetric_cross_rejected() {
        let cross = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.2, 1.0]);
        assert!(CorrelationKernel::zero().with_cross(cross).is_err());
    }

    #[test]
    fn white_noise_table_is_local() {
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let table = CorrelationKernel::white_noise(0.4)
            .unwrap()
            .node_midpoint_table(&grid, 1)
            .unwrap();
        assert!(!table.has_memory());
        assert!((table.local(0, 0) - 0.2).abs() < 1e-16);
        assert!(CorrelationKernel::white_noise(-1.0).is_err());
    }

    #[test]
    fn tabulated_kernel_interpolates_to_nodes() {
        let grid = TimeGrid::new(1.0, 3).unwrap();
        let values = DMatrix::from_row_slice(3, 3, &[3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0]);
        let kernel = CorrelationKernel::tabulated(values).unwrap();
        let table = kernel.node_midpoint_table(&grid, 1).unwrap();
        assert_eq!(table.weight(0, 0, 0, 0), 3.0);
        assert_eq!(table.weight(0, 0, 1, 0), 2.0);
        assert_eq!(table.weight(0, 0, 3, 2), 3.0);
        assert!(kernel.node_midpoint_table(&TimeGrid::new(1.0, 4).unwrap(), 1).is_err());
    }
}
