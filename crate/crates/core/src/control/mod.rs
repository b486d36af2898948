// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Time grids, pulses, Hamiltonians, disorder statistics and update shapes.

mod grid;
mod kernel;
mod sampler;
mod shape;

pub use grid::{HamiltonianFamily, PulseSet, TimeGrid};
pub use kernel::{gaussian_kernel, CorrelationKernel, KernelKind, KernelTable};
pub use sampler::{sample_perturbations, DisorderSampler, COVARIANCE_JITTER};
pub use shape::{blackman, update_shape, UpdateShape};
