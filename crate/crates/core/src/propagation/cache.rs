// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::control::{CorrelationKernel, HamiltonianFamily, KernelTable, PulseSet, TimeGrid};
use crate::quantum::{Operator, Superoperator};
use crate::{Error, Result};

/// `H̃_m` table indexed `[m][j][l]` for `0 ≤ l ≤ j ≤ N`.
pub type HtildeTable = Vec<Vec<Vec<Operator>>>;
/// `η` table indexed `[n₁][n₂][j]` for `0 ≤ j ≤ N`.
pub type EtaTable = Vec<Vec<Vec<Operator>>>;

/// `Û_(k) = exp(−iΔt H̄(t̃_{k−1}))` for zero-based midpoint `i = k − 1`.
pub fn unitary_step(
    family: &HamiltonianFamily,
    pulses: &PulseSet,
    grid: &TimeGrid,
    i: usize,
) -> Result<Operator> {
    if i >= grid.steps() {
        return Err(Error::invalid(format!(
            "step index {i} out of range for {} steps",
            grid.steps()
        )));
    }
    pulses.ensure_shape(family.control_count(), grid.steps())?;
    family.hamiltonian_at(pulses, i).unitary_evolution(grid.dt())
}

/// Coherently evolved controls `H̃_{m,[j,l]} = Û_(j)···Û_(l+1) H_m Û†_(l+1)···Û†_(j)`.
///
/// `unitaries[i]` is the step from node `i` to node `i + 1`.
pub fn build_htilde_table(unitaries: &[Operator], controls: &[Operator]) -> HtildeTable {
    let steps = unitaries.len();
    controls
        .iter()
        .map(|hm| {
            let mut rows: Vec<Vec<Operator>> = Vec::with_capacity(steps + 1);
            rows.push(vec![hm.clone()]);
            for j in 1..=steps {
                let u = &unitaries[j - 1];
                let mut row: Vec<Operator> = rows[j - 1].iter().map(|b| u.conjugate(b)).collect();
                row.push(hm.clone());
                rows.push(row);
            }
            rows
        })
        .collect()
}

/// Memory integrals `η_{n₁,n₂,[j]} = Δt Σ_{l<j} C_{n₁,n₂}(t_j, t̃_l) H̃_{n₂,[j,l]}`,
/// plus `(α/2)R_{n₁n₂}H_{n₂}` for a white-noise kernel.
pub fn build_eta_table(
    htilde: &HtildeTable,
    kernel: &KernelTable,
    grid: &TimeGrid,
    controls: &[Operator],
) -> Result<EtaTable> {
    let count = controls.len();
    if htilde.len() != count || kernel.count() != count {
        return Err(Error::StaleCache(format!(
            "tables built for {} / {} pulses, expected {count}",
            htilde.len(),
            kernel.count()
        )));
    }
    if htilde.iter().any(|rows| rows.len() != grid.steps() + 1) {
        return Err(Error::StaleCache("H̃ table does not cover the time grid".into()));
    }
    let dim = controls[0].dim();
    let mut eta = vec![vec![Vec::with_capacity(grid.steps() + 1); count]; count];
    for n1 in 0..count {
        for n2 in 0..count {
            for j in 0..=grid.steps() {
                eta[n1][n2].push(eta_entry(htilde, kernel, grid, controls, n1, n2, j, dim));
            }
        }
    }
    Ok(eta)
}

#[allow(clippy::too_many_arguments)]
fn eta_entry(
    htilde: &HtildeTable,
    kernel: &KernelTable,
    grid: &TimeGrid,
    controls: &[Operator],
    n1: usize,
    n2: usize,
    j: usize,
    dim: usize,
) -> Operator {
    let mut acc = Operator::zeros(dim);
    if kernel.has_memory() {
        let row = kernel.row(n1, n2, j);
        for (l, w) in row.iter().enumerate().take(j) {
            if *w != 0.0 {
                acc.add_scaled(grid.dt() * w, &htilde[n2][j][l]);
            }
        }
    }
    let local = kernel.local(n1, n2);
    if local != 0.0 {
        acc.add_scaled(local, &controls[n2]);
    }
    acc
}

/// Per-pulse-set propagation data for the DDME: unitary steps, the `H̃` and
/// `η` tables, and the commutator superoperators of the controls.
///
/// Invariants: every `Û_(k)` is unitary, `H̃_{m,[j,j]} = H_m` and, for
/// kernels with memory only, `η_{·,·,[0]} = 0`.
#[derive(Debug, Clone)]
pub struct PropagatorCache {
    family: HamiltonianFamily,
    grid: TimeGrid,
    kernel: KernelTable,
    pulses: PulseSet,
    unitaries: Vec<Operator>,
    htilde: HtildeTable,
    eta: EtaTable,
    control_comms: Vec<Superoperator>,
}

impl PropagatorCache {
    pub fn new(
        family: &HamiltonianFamily,
        grid: &TimeGrid,
        kernel: &CorrelationKernel,
        pulses: &PulseSet,
    ) -> Result<Self> {
        pulses.ensure_shape(family.control_count(), grid.steps())?;
        let table = kernel.node_midpoint_table(grid, family.control_count())?;
        let unitaries = (0..grid.steps())
            .map(|i| unitary_step(family, pulses, grid, i))
            .collect::<Result<Vec<_>>>()?;
        let htilde = build_htilde_table(&unitaries, family.controls());
        let eta = build_eta_table(&htilde, &table, grid, family.controls())?;
        let control_comms = family
            .controls()
            .iter()
            .map(Superoperator::commutator)
            .collect();
        Ok(Self {
            family: family.clone(),
            grid: *grid,
            kernel: table,
            pulses: pulses.clone(),
            unitaries,
            htilde,
            eta,
            control_comms,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn family(&self) -> &HamiltonianFamily {
        &self.family
    }

    pub fn kernel(&self) -> &KernelTable {
        &self.kernel
    }

    pub fn pulses(&self) -> &PulseSet {
        &self.pulses
    }

    pub fn steps(&self) -> usize {
        self.grid.steps()
    }

    pub fn unitary(&self, i: usize) -> &Operator {
        &self.unitaries[i]
    }

    pub fn htilde(&self, m: usize, j: usize, l: usize) -> &Operator {
        &self.htilde[m][j][l]
    }

    pub fn htilde_table(&self) -> &HtildeTable {
        &self.htilde
    }

    pub fn eta(&self, n1: usize, n2: usize, j: usize) -> &Operator {
        &self.eta[n1][n2][j]
    }

    pub fn eta_table(&self) -> &EtaTable {
        &self.eta
    }

    /// Replaces the pulse amplitudes on midpoint `i` and refreshes every
    /// table entry that depends on them: `Û_(i+1)`, `H̃_{[j,l]}` for
    /// `l ≤ i < j`, and `η_{[j]}` for `j > i`.
    pub fn set_step(&mut self, i: usize, amplitudes: &[f64]) -> Result<()> {
        if amplitudes.len() != self.family.control_count() {
            return Err(Error::DimensionMismatch {
                expected: self.family.control_count(),
                found: amplitudes.len(),
            });
        }
        for (m, &a) in amplitudes.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::NonFinite("pulse update"));
            }
            self.pulses.set(m, i, a);
        }
        self.unitaries[i] = unitary_step(&self.family, &self.pulses, &self.grid, i)?;
        let k = i + 1;
        for rows in self.htilde.iter_mut() {
            for j in k..=self.grid.steps() {
                let u = &self.unitaries[j - 1];
                for l in 0..k {
                    let next = u.conjugate(&rows[j - 1][l]);
                    rows[j][l] = next;
                }
            }
        }
        let count = self.family.control_count();
        let dim = self.family.dim();
        for n1 in 0..count {
            for n2 in 0..count {
                for j in k..=self.grid.steps() {
                    self.eta[n1][n2][j] = eta_entry(
                        &self.htilde,
                        &self.kernel,
                        &self.grid,
                        self.family.controls(),
                        n1,
                        n2,
                        j,
                        dim,
                    );
                }
            }
        }
        Ok(())
    }

    /// Generator `𝒦_(k)` for midpoint `i = k − 1`:
    /// `𝒦ρ = −i[H̄(t̃_i), ρ] − Σ_{m,n} [H_m, [η_{m,n,[k]}, ρ]]`.
    pub fn generator(&self, i: usize) -> Result<Superoperator> {
        if i >= self.grid.steps() {
            return Err(Error::invalid(format!("step index {i} out of range")));
        }
        let h = self.family.hamiltonian_at(&self.pulses, i);
        let mut gen = Superoperator::commutator(&h).scale(Complex64::new(0.0, -1.0));
        let minus_one = Complex64::new(-1.0, 0.0);
        for (n1, comm) in self.control_comms.iter().enumerate() {
            for n2 in 0..self.family.control_count() {
                let eta = &self.eta[n1][n2][i + 1];
                let incoherent = comm * &Superoperator::commutator(eta);
                gen.add_scaled(minus_one, &incoherent);
            }
        }
        if !gen.is_finite() {
            return Err(Error::NonFinite("DDME generator"));
        }
        Ok(gen)
    }

    /// `𝒱_(k) = exp(Δt 𝒦_(k))` for midpoint `i = k − 1`.
    pub fn step_superoperator(&self, i: usize) -> Result<Superoperator> {
        self.generator(i)?
            .expm(Complex64::new(self.grid.dt(), 0.0))
    }
}
