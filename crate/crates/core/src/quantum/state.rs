// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::operator::{Operator, HERMITIAN_TOL};
use crate::{Error, Result};

pub const TRACE_TOL: f64 = 1e-10;
/// Perturbative DDME solutions may dip slightly below zero; this much is
/// tolerated and anything below is reported, never clipped.
pub const NEGATIVITY_TOL: f64 = 1e-9;
pub const PURE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace operator with eigenvalues ≥ −[`NEGATIVITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        if !op.is_finite() {
            return Err(Error::NonFinite("density matrix"));
        }
        let deviation = op.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_eig = op.eigenvalues_hermitian()[0];
        if min_eig < -NEGATIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { op })
    }

    /// Pure state `|ψ⟩⟨ψ|` from an (unnormalized) ket.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        Self::new(Operator::projector(ket)?)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: Operator::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn into_op(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn purity(&self) -> f64 {
        purity(&self.op)
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() <= PURE_TOL
    }

    /// Qubit computational and Pauli eigenstates: `0`, `1`, `+`, `-`, `+i`, `-i`.
    pub fn qubit_label(label: &str) -> Result<Self> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let ket = match label {
            "0" => [c(1.0, 0.0), c(0.0, 0.0)],
            "1" => [c(0.0, 0.0), c(1.0, 0.0)],
            "+" => [c(s, 0.0), c(s, 0.0)],
            "-" => [c(s, 0.0), c(-s, 0.0)],
            "+i" => [c(s, 0.0), c(0.0, s)],
            "-i" => [c(s, 0.0), c(0.0, -s)],
            other => return Err(Error::invalid(format!("unknown qubit state label {other:?}"))),
        };
        Self::pure(&ket)
    }
}

/// `Tr(ρ²)`.
pub fn purity(rho: &Operator) -> f64 {
    rho.trace_product(rho).re
}

/// Fidelity `Tr√(√σ ρ √σ)` for a pure target `σ = |ψ⟩⟨ψ|`, which reduces to
/// `√⟨ψ|ρ|ψ⟩ = √Tr(σρ)`.
pub fn fidelity_pure_target(target: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    if !target.is_pure() {
        return Err(Error::NotPure {
            purity: target.purity(),
        });
    }
    target.op().ensure_same_dim(rho.op())?;
    Ok(overlap_fidelity(target.op(), rho.op()))
}

/// `√max(0, Re Tr(σρ))` without validating purity of `σ`.
pub(crate) fn overlap_fidelity(target: &Operator, rho: &Operator) -> f64 {
    target.trace_product(rho).re.max(0.0).sqrt()
}

/// Trace distance `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &Operator, sigma: &Operator) -> Result<f64> {
    rho.ensure_same_dim(sigma)?;
    let diff = rho - sigma;
    Ok(0.5 * diff.eigenvalues_hermitian().iter().map(|e| e.abs()).sum::<f64>())
}

/// Bloch coordinates `(Tr ρσx, Tr ρσy, Tr ρσz)` of a qubit state.
pub fn bloch_vector(rho: &Operator) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    Ok([
        rho.trace_product(&Operator::sigma_x()).re,
        rho.trace_product(&Operator::sigma_y()).re,
        rho.trace_product(&Operator::sigma_z()).re,
    ])
}
