// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::control::{CorrelationKernel, HamiltonianFamily, TimeGrid};
use crate::quantum::DensityMatrix;
use crate::{Error, Result};

/// State-transfer task under pulse disorder.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    pub rho0: DensityMatrix,
    pub target: DensityMatrix,
    pub family: HamiltonianFamily,
    pub grid: TimeGrid,
    pub kernel: CorrelationKernel,
}

impl ControlProblem {
    pub fn new(
        rho0: DensityMatrix,
        target: DensityMatrix,
        family: HamiltonianFamily,
        grid: TimeGrid,
        kernel: CorrelationKernel,
    ) -> Result<Self> {
        if !target.is_pure() {
            return Err(Error::NotPure {
                purity: target.purity(),
            });
        }
        rho0.op().ensure_same_dim(target.op())?;
        rho0.op().ensure_same_dim(family.drift())?;
        Ok(Self {
            rho0,
            target,
            family,
            grid,
            kernel,
        })
    }

    pub fn with_kernel(&self, kernel: CorrelationKernel) -> Self {
        Self {
            kernel,
            ..self.clone()
        }
    }

    pub fn control_count(&self) -> usize {
        self.family.control_count()
    }

    pub fn dim(&self) -> usize {
        self.family.dim()
    }
}
