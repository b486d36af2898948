// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense linear algebra for small quantum systems.

mod expm;
mod operator;
mod state;
mod superop;

pub use expm::expm_matrix;
pub use operator::{Operator, HERMITIAN_TOL};
pub(crate) use state::overlap_fidelity;
pub use state::{
    bloch_vector, fidelity_pure_target, purity, trace_distance, DensityMatrix, NEGATIVITY_TOL,
    PURE_TOL, TRACE_TOL,
};
pub use superop::{devectorize, vectorize, Superoperator};

pub use num_complex::Complex64;

/// `S` with `S vec(X) = vec([A, X])`.
pub fn commutator_super(a: &Operator) -> Superoperator {
    Superoperator::commutator(a)
}

/// `S` with `S vec(X) = vec([A, [B, X]])`.
pub fn double_commutator_super(a: &Operator, b: &Operator) -> crate::Result<Superoperator> {
    Superoperator::double_commutator(a, b)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn random_operator(rng: &mut impl Rng, d: usize) -> Operator {
        let entries: Vec<Complex64> = (0..d * d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Operator::from_rows(d, &entries).unwrap()
    }

    pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> Operator {
        let a = random_operator(rng, d);
        (&a + &a.adjoint()).scale_real(0.5)
    }

    /// Random full-rank density matrix `A A† / Tr(A A†)`.
    pub fn random_density(rng: &mut impl Rng, d: usize) -> Operator {
        let a = random_operator(rng, d);
        let p = &a * &a.adjoint();
        let tr = p.trace().re;
        p.scale_real(1.0 / tr)
    }
}
