// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use super::cache::{unitary_step, PropagatorCache};
use super::trajectory::Trajectory;
use crate::control::{CorrelationKernel, PulseSet};
use crate::quantum::Operator;
use crate::{ControlProblem, Error, Result};

/// `ρ_[k] = 𝒱_(k) ρ_[k−1]` for midpoint `i = k − 1`.
pub fn ddme_step(cache: &PropagatorCache, i: usize, rho: &Operator) -> Result<Operator> {
    cache.step_superoperator(i)?.apply(rho)
}

/// Adjoint step `χ_[k−1] = 𝒱†_(k) χ_[k]` for midpoint `i = k − 1`.
pub fn ddme_backward_step(cache: &PropagatorCache, i: usize, chi: &Operator) -> Result<Operator> {
    cache.step_superoperator(i)?.adjoint().apply(chi)
}

/// Node states `ρ_[0..=N]` obtained by chaining DDME steps from `rho0`.
pub fn propagate_cache(cache: &PropagatorCache, rho0: &Operator) -> Result<Vec<Operator>> {
    let mut states = Vec::with_capacity(cache.steps() + 1);
    states.push(rho0.clone());
    for i in 0..cache.steps() {
        let next = ddme_step(cache, i, &states[i])?;
        states.push(next);
    }
    Ok(states)
}

/// Disorder-averaged trajectory from the DDME with the problem's kernel.
pub fn ddme_propagate(problem: &ControlProblem, pulses: &PulseSet) -> Result<Trajectory> {
    let cache = PropagatorCache::new(&problem.family, &problem.grid, &problem.kernel, pulses)?;
    let states = propagate_cache(&cache, problem.rho0.op())?;
    Trajectory::new(problem.grid, states, &problem.target)
}

/// Markovian limit `C_{m,n}(t,t′) = α δ(t − t′) δ_{mn}`:
/// `∂ρ = −i[H̄, ρ] − (α/2) Σ_m [H_m, [H_m, ρ]]`.
pub fn white_noise_propagate(
    problem: &ControlProblem,
    pulses: &PulseSet,
    alpha: f64,
) -> Result<Trajectory> {
    if alpha < 0.0 {
        return Err(Error::invalid(format!("alpha must be non-negative, got {alpha}")));
    }
    ddme_propagate(&problem.with_kernel(CorrelationKernel::white_noise(alpha)?), pulses)
}

/// Closed-system trajectory under the unperturbed pulses.
pub fn unitary_propagate(problem: &ControlProblem, pulses: &PulseSet) -> Result<Trajectory> {
    let states = unitary_states(problem, pulses)?;
    Trajectory::new(problem.grid, states, &problem.target)
}

pub(crate) fn unitary_states(problem: &ControlProblem, pulses: &PulseSet) -> Result<Vec<Operator>> {
    let grid = &problem.grid;
    let mut states = Vec::with_capacity(grid.steps() + 1);
    states.push(problem.rho0.op().clone());
    for i in 0..grid.steps() {
        let u = unitary_step(&problem.family, pulses, grid, i)?;
        let next = u.conjugate(&states[i]);
        states.push(next);
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{HamiltonianFamily, TimeGrid};
    use crate::quantum::testutil::*;
    use crate::quantum::{purity, Complex64, DensityMatrix};

    fn qubit_problem(kernel: CorrelationKernel, steps: usize, total: f64) -> ControlProblem {
        ControlProblem::new(
            DensityMatrix::qubit_label("+").unwrap(),
            DensityMatrix::qubit_label("-").unwrap(),
            HamiltonianFamily::qubit_z_drift_x_control(),
            TimeGrid::new(total, steps).unwrap(),
            kernel,
        )
        .unwrap()
    }

    fn gaussian_pulse(grid: &TimeGrid) -> PulseSet {
        let half = grid.final_time() / 2.0;
        PulseSet::from_fn(grid, 1, |_, t| (-(t - half).powi(2) / 2.0).exp()).unwrap()
    }

    #[test]
    fn unitary_step_diagonal_generator() {
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let fam = HamiltonianFamily::qubit_z_drift_x_control();
        let u = unitary_step(&fam, &PulseSet::zeros(1, 10), &grid, 3).unwrap();
        let expected = Operator::from_rows(
            2,
            &[
                Complex64::new(0.0, -0.1).exp(),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.1).exp(),
            ],
        )
        .unwrap();
        assert!((&u - &expected).max_abs() < 1e-15);
        assert!(unitary_step(&fam, &PulseSet::zeros(1, 10), &grid, 10).is_err());
    }

    #[test]
    fn unitary_step_vanishes_with_dt() {
        let grid = TimeGrid::new(1e-12, 1).unwrap();
        let fam = HamiltonianFamily::qubit_z_drift_x_control();
        let u = unitary_step(&fam, &PulseSet::new(vec![vec![3.0]]).unwrap(), &grid, 0).unwrap();
        assert!((&u - &Operator::identity(2)).max_abs() < 1e-11);
    }

    #[test]
    fn constant_pulse_product_matches_single_exponential() {
        let grid = TimeGrid::new(3.0, 60).unwrap();
        let fam = HamiltonianFamily::qubit_z_drift_x_control();
        let pulses = PulseSet::from_fn(&grid, 1, |_, _| 0.7).unwrap();
        let mut product = Operator::identity(2);
        for i in 0..grid.steps() {
            product = &unitary_step(&fam, &pulses, &grid, i).unwrap() * &product;
        }
        let exact = fam.hamiltonian(&[0.7]).expm(Complex64::new(0.0, -3.0)).unwrap();
        assert!((&product - &exact).max_abs() < 1e-10);
    }

    #[test]
    fn zero_kernel_step_is_unitary_conjugation() {
        let p = qubit_problem(CorrelationKernel::zero(), 50, 10.0);
        let pulses = gaussian_pulse(&p.grid);
        let cache = PropagatorCache::new(&p.family, &p.grid, &p.kernel, &pulses).unwrap();
        let mut r = rng(11);
        let rho = random_density(&mut r, 2);
        for i in [0, 17, 49] {
            let via_ddme = ddme_step(&cache, i, &rho).unwrap();
            let via_unitary = cache.unitary(i).conjugate(&rho);
            assert!((&via_ddme - &via_unitary).max_abs() < 1e-13);
        }
    }

    #[test]
    fn maximally_mixed_state_is_fixed() {
        let p = qubit_problem(CorrelationKernel::gaussian(0.3, 2.0).unwrap(), 40, 10.0);
        let pulses = gaussian_pulse(&p.grid);
        let cache = PropagatorCache::new(&p.family, &p.grid, &p.kernel, &pulses).unwrap();
        let mixed = Operator::identity(2).scale_real(0.5);
        for i in 0..40 {
            let out = ddme_step(&cache, i, &mixed).unwrap();
            assert!((&out - &mixed).max_abs() < 1e-14);
        }
    }

    /// Fourth-order Runge-Kutta on `∂ρ = −i[H, ρ] − Σ[H_m, [η_m, ρ]]` with the
    /// step's generator frozen, using only operator products.
    fn rk4_reference(h: &Operator, jumps: &[(Operator, Operator)], rho: &Operator, dt: f64, sub: usize) -> Operator {
        let rhs = |x: &Operator| {
            let mut out = h.commutator(x).scale(Complex64::new(0.0, -1.0));
            for (hm, eta) in jumps {
                out -= &hm.commutator(&eta.commutator(x));
            }
            out
        };
        let h_sub = dt / sub as f64;
        let mut x = rho.clone();
        for _ in 0..sub {
            let k1 = rhs(&x);
            let mut y = x.clone();
            y.add_scaled(h_sub / 2.0, &k1);
            let k2 = rhs(&y);
            let mut y = x.clone();
            y.add_scaled(h_sub / 2.0, &k2);
            let k3 = rhs(&y);
            let mut y = x.clone();
            y.add_scaled(h_sub, &k3);
            let k4 = rhs(&y);
            x.add_scaled(h_sub / 6.0, &k1);
            x.add_scaled(h_sub / 3.0, &k2);
            x.add_scaled(h_sub / 3.0, &k3);
            x.add_scaled(h_sub / 6.0, &k4);
        }
        x
    }

    #[test]
    fn ddme_step_matches_rk4_reference() {
        let p = qubit_problem(CorrelationKernel::gaussian(0.05, 3.0).unwrap(), 100, 10.0);
        let pulses = gaussian_pulse(&p.grid);
        let cache = PropagatorCache::new(&p.family, &p.grid, &p.kernel, &pulses).unwrap();
        let rho = DensityMatrix::qubit_label("+").unwrap().into_op();
        for i in [0, 30, 99] {
            let h = p.family.hamiltonian_at(&pulses, i);
            let jumps = vec![(Operator::sigma_x(), cache.eta(0, 0, i + 1).clone())];
            let reference = rk4_reference(&h, &jumps, &rho, p.grid.dt(), 100);
            let got = ddme_step(&cache, i, &rho).unwrap();
            assert!((&got - &reference).max_abs() < 1e-12, "step {i}");
        }
    }

    #[test]
    fn backward_step_is_adjoint() {
        let p = qubit_problem(CorrelationKernel::gaussian(0.1, 1.0).unwrap(), 30, 5.0);
        let pulses = gaussian_pulse(&p.grid);
        let cache = PropagatorCache::new(&p.family, &p.grid, &p.kernel, &pulses).unwrap();
        let mut r = rng(12);
        for i in [0, 12, 29] {
            let chi = random_operator(&mut r, 2);
            let rho = random_operator(&mut r, 2);
            let lhs = ddme_backward_step(&cache, i, &chi).unwrap().hs_inner(&rho);
            let rhs = chi.hs_inner(&ddme_step(&cache, i, &rho).unwrap());
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_kernel_backward_then_forward_roundtrip() {
        let p = qubit_problem(CorrelationKernel::zero(), 40, 10.0);
        let pulses = gaussian_pulse(&p.grid);
        let cache = PropagatorCache::new(&p.family, &p.grid, &p.kernel, &pulses).unwrap();
        let target = p.target.op().clone();
        let mut chi = target.clone();
        for i in (0..40).rev() {
            let back = ddme_backward_step(&cache, i, &chi).unwrap();
            assert!((&back - &cache.unitary(i).conjugate_adjoint(&chi)).max_abs() < 1e-13);
            chi = back;
        }
        for i in 0..40 {
            chi = ddme_step(&cache, i, &chi).unwrap();
        }
        assert!((&chi - &target).max_abs() < 1e-12);
    }

    #[test]
    fn white_noise_dephasing_closed_form() {
        let fam = HamiltonianFamily::new(Operator::zeros(2), vec![Operator::sigma_x()]).unwrap();
        let grid = TimeGrid::new(2.0, 40).unwrap();
        let p = ControlProblem::new(
            DensityMatrix::qubit_label("0").unwrap(),
            DensityMatrix::qubit_label("1").unwrap(),
            fam,
            grid,
            CorrelationKernel::zero(),
        )
        .unwrap();
        let alpha = 0.3;
        let traj = white_noise_propagate(&p, &PulseSet::zeros(1, 40), alpha).unwrap();
        for (s, state) in traj.states().iter().enumerate() {
            let decay = (-2.0 * alpha * grid.node(s)).exp();
            let expected = &Operator::identity(2).scale_real(0.5) + &Operator::sigma_z().scale_real(0.5 * decay);
            assert!((state - &expected).max_abs() < 1e-12, "node {s}");
        }
        assert!(white_noise_propagate(&p, &PulseSet::zeros(1, 40), -0.1).is_err());
    }

    #[test]
    fn white_noise_zero_alpha_is_unitary() {
        let p = qubit_problem(CorrelationKernel::zero(), 50, 10.0);
        let pulses = gaussian_pulse(&p.grid);
        let a = white_noise_propagate(&p, &pulses, 0.0).unwrap();
        let b = unitary_propagate(&p, &pulses).unwrap();
        assert!(a.max_trace_distance(&b).unwrap() < 1e-12);
    }

    #[test]
    fn white_noise_purity_is_monotone() {
        let mut r = rng(13);
        use rand::Rng;
        let p = qubit_problem(CorrelationKernel::zero(), 80, 8.0);
        for _ in 0..5 {
            let values: Vec<f64> = (0..80).map(|_| r.random_range(-2.0..2.0)).collect();
            let pulses = PulseSet::new(vec![values]).unwrap();
            let traj = white_noise_propagate(&p, &pulses, 0.05).unwrap();
            for w in traj.purity().windows(2) {
                assert!(w[1] <= w[0] + 1e-10);
            }
        }
    }

    #[test]
    fn ddme_preserves_trace_and_hermiticity() {
        let p = qubit_problem(CorrelationKernel::gaussian(0.01, 100.0).unwrap(), 100, 10.0);
        let pulses = gaussian_pulse(&p.grid);
        let cache = PropagatorCache::new(&p.family, &p.grid, &p.kernel, &pulses).unwrap();
        let states = propagate_cache(&cache, p.rho0.op()).unwrap();
        for s in &states {
            assert!((s.trace() - 1.0).norm() < 1e-10);
            assert!(s.hermiticity_defect() < 1e-10);
        }
        assert!(purity(states.last().unwrap()) < 1.0);
    }
}
