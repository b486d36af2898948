// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::quantum::Operator;
use crate::{Error, Result};

/// Uniform time grid: nodes `t_s = s·Δt` for `s = 0..=N`, and interleaved
/// midpoints `t̃_i = (i + ½)·Δt` for `i = 0..N`.
///
/// Pulse sample `i` (zero-based) lives on midpoint `t̃_i` and drives the step
/// from node `i` to node `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    final_time: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(final_time: f64, steps: usize) -> Result<Self> {
        if !(final_time.is_finite() && final_time > 0.0) {
            return Err(Error::invalid(format!(
                "final time must be positive, got {final_time}"
            )));
        }
        if steps == 0 {
            return Err(Error::invalid("time grid needs at least one step"));
        }
        Ok(Self { final_time, steps })
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.final_time / self.steps as f64
    }

    pub fn node(&self, s: usize) -> f64 {
        s as f64 * self.dt()
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dt()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(|s| self.node(s))
    }

    pub fn midpoints(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.midpoint(i))
    }
}

/// `M` real control pulses sampled on the midpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSet {
    values: Vec<Vec<f64>>,
}

impl PulseSet {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("pulse set must contain at least one pulse"));
        }
        let len = values[0].len();
        if len == 0 {
            return Err(Error::invalid("pulses must have at least one sample"));
        }
        for pulse in &values {
            if pulse.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    found: pulse.len(),
                });
            }
            if pulse.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("pulse samples"));
            }
        }
        Ok(Self { values })
    }

    pub fn zeros(count: usize, steps: usize) -> Self {
        Self {
            values: vec![vec![0.0; steps]; count],
        }
    }

    /// Samples `f(m, t)` at every midpoint of `grid`.
    pub fn from_fn(grid: &TimeGrid, count: usize, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let values = (0..count)
            .map(|m| grid.midpoints().map(|t| f(m, t)).collect())
            .collect();
        Self::new(values)
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn steps(&self) -> usize {
        self.values[0].len()
    }

    pub fn get(&self, m: usize, i: usize) -> f64 {
        self.values[m][i]
    }

    pub fn set(&mut self, m: usize, i: usize, value: f64) {
        self.values[m][i] = value;
    }

    pub fn pulse(&self, m: usize) -> &[f64] {
        &self.values[m]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// All pulse values at midpoint `i`.
    pub fn at(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|p| p[i]).collect()
    }

    /// Elementwise sum, used to form perturbed pulses `f + g`.
    pub fn plus(&self, other: &PulseSet) -> Result<PulseSet> {
        self.ensure_shape(other.count(), other.steps())?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Self { values })
    }

    pub fn max_abs_diff(&self, other: &PulseSet) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn ensure_shape(&self, count: usize, steps: usize) -> Result<()> {
        if self.count() != count {
            return Err(Error::DimensionMismatch {
                expected: count,
                found: self.count(),
            });
        }
        if self.steps() != steps {
            return Err(Error::DimensionMismatch {
                expected: steps,
                found: self.steps(),
            });
        }
        Ok(())
    }
}

/// Drift `H₀` plus control Hamiltonians `H_m`: `H̄(t) = H₀ + Σ f_m(t) H_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianFamily {
    drift: Operator,
    controls: Vec<Operator>,
}

impl HamiltonianFamily {
    pub fn new(drift: Operator, controls: Vec<Operator>) -> Result<Self> {
        if controls.is_empty() {
            return Err(Error::invalid("at least one control Hamiltonian is required"));
        }
        drift.ensure_hermitian()?;
        for h in &controls {
            drift.ensure_same_dim(h)?;
            h.ensure_hermitian()?;
        }
        Ok(Self { drift, controls })
    }

    /// `H₀ = σz`, `H₁ = σx`.
    pub fn qubit_z_drift_x_control() -> Self {
        Self::new(Operator::sigma_z(), vec![Operator::sigma_x()]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.drift.dim()
    }

    pub fn drift(&self) -> &Operator {
        &self.drift
    }

    pub fn controls(&self) -> &[Operator] {
        &self.controls
    }

    pub fn control_count(&self) -> usize {
        self.controls.len()
    }

    /// `H₀ + Σ_m amplitudes[m] H_m`.
    pub fn hamiltonian(&self, amplitudes: &[f64]) -> Operator {
        debug_assert_eq!(amplitudes.len(), self.controls.len());
        let mut h = self.drift.clone();
        for (a, hm) in amplitudes.iter().zip(&self.controls) {
            h.add_scaled(*a, hm);
        }
        h
    }

    /// Mean Hamiltonian on midpoint `i`.
    pub fn hamiltonian_at(&self, pulses: &PulseSet, i: usize) -> Operator {
        let mut h = self.drift.clone();
        for (m, hm) in self.controls.iter().enumerate() {
            h.add_scaled(pulses.get(m, i), hm);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoints_interleave_nodes() {
        let grid = TimeGrid::new(10.0, 100).unwrap();
        assert!((grid.dt() - 0.1).abs() < 1e-15);
        for i in 0..grid.steps() {
            let mid = grid.midpoint(i);
            assert!((mid - 0.5 * (grid.node(i) + grid.node(i + 1))).abs() < 1e-14);
        }
        assert_eq!(grid.nodes().count(), 101);
        assert!((grid.node(100) - 10.0).abs() < 1e-14);
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
        assert!(TimeGrid::new(f64::NAN, 3).is_err());
    }

    #[test]
    fn pulse_set_validation() {
        assert!(PulseSet::new(vec![]).is_err());
        assert!(PulseSet::new(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(PulseSet::new(vec![vec![1.0, f64::INFINITY]]).is_err());
        let p = PulseSet::new(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(p.at(1), vec![2.0, 4.0]);
    }

    #[test]
    fn hamiltonian_family_rejects_non_hermitian() {
        let bad = Operator::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(HamiltonianFamily::new(Operator::sigma_z(), vec![bad]).is_err());
        assert!(HamiltonianFamily::new(Operator::sigma_z(), vec![Operator::identity(3)]).is_err());
    }

    #[test]
    fn mean_hamiltonian() {
        let fam = HamiltonianFamily::qubit_z_drift_x_control();
        let h = fam.hamiltonian(&[0.5]);
        let expected = &Operator::sigma_z() + &Operator::sigma_x().scale_real(0.5);
        assert_eq!(h, expected);
    }
}
