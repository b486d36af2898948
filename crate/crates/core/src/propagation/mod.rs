// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Forward and adjoint propagation of the disorder-averaged state.
//!
//! The DDME for pulse perturbations reads
//!
//! ```text
//! ∂ρ̄ = −i[H̄(t), ρ̄] − Σ_{m,n} [H_m, [η_{m,n}(t), ρ̄]],
//! η_{m,n}(t) = ∫₀ᵗ C_{m,n}(t, t′) Ū(t, t′) H_n Ū†(t, t′) dt′,
//! ```
//!
//! discretized as `ρ̄_[k] = exp(Δt 𝒦_(k)) ρ̄_[k−1]` with the memory integral
//! evaluated as a left Riemann sum over midpoints.

mod cache;
mod ddme;
mod ensemble;
mod trajectory;

pub use cache::{
    build_eta_table, build_htilde_table, unitary_step, EtaTable, HtildeTable, PropagatorCache,
};
pub use ddme::{
    ddme_backward_step, ddme_propagate, ddme_step, propagate_cache, unitary_propagate,
    white_noise_propagate,
};
pub use ensemble::{ensemble_average, realization_trajectory};
pub use trajectory::Trajectory;
