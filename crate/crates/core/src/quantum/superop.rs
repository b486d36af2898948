// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::expm::expm_matrix;
use super::operator::Operator;
use crate::{Error, Result};

/// Linear map on d×d operators, stored as a d²×d² matrix acting on
/// column-stacked operators: `vec(X)[i + d·j] = X[i, j]`.
///
/// With this convention `vec(A X B) = (Bᵀ ⊗ A) vec(X)`, and the matrix
/// adjoint of a superoperator is its adjoint with respect to the
/// Hilbert-Schmidt inner product `⟨X, Y⟩ = Tr(X† Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    op_dim: usize,
    mat: DMatrix<Complex64>,
}

/// Column-stacks an operator.
pub fn vectorize(x: &Operator) -> DVector<Complex64> {
    DVector::from_column_slice(x.matrix().as_slice())
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &DVector<Complex64>) -> Result<Operator> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() {
        return Err(Error::invalid(format!(
            "vector of length {} is not a vectorized square matrix",
            v.len()
        )));
    }
    Operator::new(DMatrix::from_column_slice(d, d, v.as_slice()))
}

impl Superoperator {
    pub fn from_matrix(op_dim: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        let n = op_dim * op_dim;
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: mat.nrows().max(mat.ncols()),
            });
        }
        Ok(Self { op_dim, mat })
    }

    pub fn zeros(op_dim: usize) -> Self {
        let n = op_dim * op_dim;
        Self {
            op_dim,
            mat: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(op_dim: usize) -> Self {
        let n = op_dim * op_dim;
        Self {
            op_dim,
            mat: DMatrix::identity(n, n),
        }
    }

    /// `X ↦ A X`.
    pub fn left(a: &Operator) -> Self {
        let d = a.dim();
        Self {
            op_dim: d,
            mat: DMatrix::identity(d, d).kronecker(a.matrix()),
        }
    }

    /// `X ↦ X B`.
    pub fn right(b: &Operator) -> Self {
        let d = b.dim();
        Self {
            op_dim: d,
            mat: b.matrix().transpose().kronecker(&DMatrix::identity(d, d)),
        }
    }

    /// `X ↦ U X U†`.
    pub fn conjugation(u: &Operator) -> Self {
        let d = u.dim();
        Self {
            op_dim: d,
            mat: u.matrix().conjugate().kronecker(u.matrix()),
        }
    }

    /// `X ↦ [A, X]`.
    pub fn commutator(a: &Operator) -> Self {
        let d = a.dim();
        let ident = DMatrix::identity(d, d);
        Self {
            op_dim: d,
            mat: ident.kronecker(a.matrix()) - a.matrix().transpose().kronecker(&ident),
        }
    }

    /// `X ↦ [A, [B, X]]`.
    pub fn double_commutator(a: &Operator, b: &Operator) -> Result<Self> {
        a.ensure_same_dim(b)?;
        Ok(&Self::commutator(a) * &Self::commutator(b))
    }

    pub fn op_dim(&self) -> usize {
        self.op_dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn apply(&self, x: &Operator) -> Result<Operator> {
        if x.dim() != self.op_dim {
            return Err(Error::DimensionMismatch {
                expected: self.op_dim,
                found: x.dim(),
            });
        }
        let out = &self.mat * vectorize(x);
        Ok(Operator::from_matrix_unchecked(DMatrix::from_column_slice(
            self.op_dim,
            self.op_dim,
            out.as_slice(),
        )))
    }

    /// Hilbert-Schmidt adjoint.
    pub fn adjoint(&self) -> Self {
        Self {
            op_dim: self.op_dim,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            op_dim: self.op_dim,
            mat: &self.mat * factor,
        }
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, factor: Complex64, other: &Superoperator) {
        self.mat
            .iter_mut()
            .zip(other.mat.iter())
            .for_each(|(a, b)| *a += b * factor);
    }

    /// `exp(scale · self)`.
    pub fn expm(&self, scale: Complex64) -> Result<Self> {
        let scaled = &self.mat * scale;
        Ok(Self {
            op_dim: self.op_dim,
            mat: expm_matrix(&scaled)?,
        })
    }

    /// `‖vec(I)† S − vec(I)†‖_max`; zero for trace-preserving maps.
    pub fn trace_preservation_defect(&self) -> f64 {
        let d = self.op_dim;
        let n = d * d;
        let mut worst: f64 = 0.0;
        for col in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                acc += self.mat[(i + d * i, col)];
            }
            let expected = if col % (d + 1) == 0 { 1.0 } else { 0.0 };
            worst = worst.max((acc - expected).norm());
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            op_dim: self.op_dim,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            op_dim: self.op_dim,
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// Composition `(self ∘ rhs)(X) = self(rhs(X))`.
impl Mul for &Superoperator {
    type Output = Superoperator;
    fn mul(self, rhs: &Superoperator) -> Superoperator {
        Superoperator {
            op_dim: self.op_dim,
            mat: &self.mat * &rhs.mat,
        }
    }
}
