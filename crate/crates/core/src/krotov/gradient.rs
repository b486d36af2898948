// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::propagation::PropagatorCache;
use crate::quantum::Operator;
use crate::{Error, Result};

/// Update direction `D_{m,(k)}` for midpoint `i = k − 1`, real part.
///
/// `states[j]` and `costates[j]` must hold `ρ̄_[j]` and `χ_[j]` for every
/// `j ≥ k`, computed with the pulses currently stored in `cache`.
pub fn ddme_gradient(
    cache: &PropagatorCache,
    states: &[Operator],
    costates: &[Operator],
    m: usize,
    i: usize,
) -> Result<f64> {
    Ok(ddme_gradient_complex(cache, states, costates, m, i)?.re)
}

/// Same as [`ddme_gradient`] but keeps the imaginary part, which vanishes
/// for Hermitian states and costates.
///
/// ```text
/// D = Tr(χ_[k] (−i)[H_m, ρ̄_[k]])
///   − Σ_{j≥k} Σ_{n₁,n₂} Tr(χ_[j] [H_{n₁}, [η′_{n₁,n₂,[j]}, ρ̄_[j]]]),
/// η′ = −iΔt² [H̃_{m,[j,k]}, Σ_{l<k} C_{n₁,n₂}(t_j, t̃_l) H̃_{n₂,[j,l]}].
/// ```
///
/// The last line is `∂η_{n₁,n₂,[j]}/∂f_{m,(k)}` to first order in `Δt`:
/// only factors `Û_(k)` inside `H̃_{[j,l]}` with `l < k ≤ j` depend on the
/// sample, and `Ū_[j,k]` has been absorbed into the `H̃` table.
pub fn ddme_gradient_complex(
    cache: &PropagatorCache,
    states: &[Operator],
    costates: &[Operator],
    m: usize,
    i: usize,
) -> Result<Complex64> {
    let steps = cache.steps();
    let count = cache.family().control_count();
    if states.len() != steps + 1 || costates.len() != steps + 1 {
        return Err(Error::StaleCache(format!(
            "expected {} states and costates, got {} and {}",
            steps + 1,
            states.len(),
            costates.len()
        )));
    }
    if m >= count || i >= steps {
        return Err(Error::invalid(format!(
            "gradient index (m={m}, i={i}) out of range"
        )));
    }
    let k = i + 1;
    let controls = cache.family().controls();
    let minus_i = Complex64::new(0.0, -1.0);

    let coherent = controls[m].commutator(&states[k]).scale(minus_i);
    let mut d = costates[k].trace_product(&coherent);

    let kernel = cache.kernel();
    if !kernel.has_memory() {
        return Ok(d);
    }
    let dt = cache.grid().dt();
    let dim = cache.family().dim();
    let prefactor = Complex64::new(0.0, -dt * dt);
    for j in k..=steps {
        let hm_jk = cache.htilde(m, j, k);
        for n1 in 0..count {
            for n2 in 0..count {
                let row = kernel.row(n1, n2, j);
                let mut memory = Operator::zeros(dim);
                let mut any = false;
                for (l, w) in row.iter().enumerate().take(k) {
                    if *w != 0.0 {
                        memory.add_scaled(*w, cache.htilde(n2, j, l));
                        any = true;
                    }
                }
                if !any {
                    continue;
                }
                let eta_prime = hm_jk.commutator(&memory).scale(prefactor);
                let inner = eta_prime.commutator(&states[j]);
                let outer = controls[n1].commutator(&inner);
                d -= costates[j].trace_product(&outer);
            }
        }
    }
    if !(d.re.is_finite() && d.im.is_finite()) {
        return Err(Error::NonFinite("Krotov update direction"));
    }
    Ok(d)
}
