// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Disorder-dressed master equation (DDME) propagation and a Krotov
//! optimizer for control pulses that stay on target under correlated
//! Gaussian pulse perturbations.
//!
//! Units: ħ = 1 and the drift frequency scale ω₀ = 1 throughout.
//!
//! Module map:
//! - [`quantum`]: dense operators, column-stacked superoperators, matrix
//!   exponentials, purity/fidelity metrics.
//! - [`control`]: time grids, pulses, Hamiltonian families, correlation
//!   kernels, update shapes and the Gaussian disorder sampler.
//! - [`propagation`]: unitary, DDME (forward and adjoint), white-noise and
//!   brute-force ensemble propagation.
//! - [`krotov`]: standard and disorder-dressed Krotov optimizers.

pub mod control;
pub mod error;
pub mod krotov;
pub mod problem;
pub mod propagation;
pub mod quantum;

pub use error::{Error, Result};
pub use problem::ControlProblem;
