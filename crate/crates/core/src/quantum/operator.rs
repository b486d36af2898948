// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::expm::expm_matrix;
use crate::{Error, Result};

/// Tolerance for treating an operator as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex square matrix: Hamiltonians, density matrices, propagators.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::invalid("operator dimension must be positive"));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds an operator from row-major real entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(dim, &c)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn sigma_x() -> Self {
        Self::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn sigma_y() -> Self {
        let i = Complex64::i();
        Self::from_rows(2, &[Complex64::new(0.0, 0.0), -i, i, Complex64::new(0.0, 0.0)]).unwrap()
    }

    pub fn sigma_z() -> Self {
        Self::from_real_rows(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// Projector |ψ⟩⟨ψ| onto the normalized ket.
    pub fn projector(ket: &[Complex64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid("ket must be finite and nonzero"));
        }
        let d = ket.len();
        let mat = DMatrix::from_fn(d, d, |r, c| ket[r] * ket[c].conj() / (norm * norm));
        Self::new(mat)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator) -> Operator {
        Self::from_matrix_unchecked(self.mat.kronecker(&other.mat))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Operator {
        Self::from_matrix_unchecked(self.mat.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Operator) -> Complex64 {
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.mat[(i, j)] * other.mat[(j, i)];
            }
        }
        acc
    }

    /// Hilbert-Schmidt inner product `Tr(self† · other)`.
    pub fn hs_inner(&self, other: &Operator) -> Complex64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `AX − XA`.
    pub fn commutator(&self, other: &Operator) -> Operator {
        Self::from_matrix_unchecked(&self.mat * &other.mat - &other.mat * &self.mat)
    }

    /// `U X U†`.
    pub fn conjugate(&self, x: &Operator) -> Operator {
        Self::from_matrix_unchecked(&self.mat * &x.mat * self.mat.adjoint())
    }

    /// `U† X U`.
    pub fn conjugate_adjoint(&self, x: &Operator) -> Operator {
        Self::from_matrix_unchecked(self.mat.adjoint() * &x.mat * &self.mat)
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Self::from_matrix_unchecked(&self.mat * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Operator {
        Self::from_matrix_unchecked(&self.mat * Complex64::new(factor, 0.0))
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, factor: f64, other: &Operator) {
        self.mat
            .iter_mut()
            .zip(other.mat.iter())
            .for_each(|(a, b)| *a += b * factor);
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn ensure_same_dim(&self, other: &Operator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Eigenvalues and eigenvectors of the Hermitian part of the operator,
    /// eigenvalues in ascending order.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let herm = (&self.mat + self.mat.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        (values, vectors)
    }

    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        self.eigh().0
    }

    /// `exp(−i·t·H)` for Hermitian `H = self`, via eigendecomposition.
    pub fn unitary_evolution(&self, t: f64) -> Result<Operator> {
        if !self.is_finite() || !t.is_finite() {
            return Err(Error::NonFinite("Hamiltonian"));
        }
        self.ensure_hermitian()?;
        let (values, vectors) = self.eigh();
        let d = self.dim();
        let mut scaled = vectors.clone();
        for (c, &lambda) in values.iter().enumerate() {
            let phase = Complex64::new(0.0, -t * lambda).exp();
            for r in 0..d {
                scaled[(r, c)] *= phase;
            }
        }
        Ok(Self::from_matrix_unchecked(scaled * vectors.adjoint()))
    }

    /// Matrix exponential `exp(scale · self)` by scaling and squaring.
    pub fn expm(&self, scale: Complex64) -> Result<Operator> {
        let scaled = &self.mat * scale;
        expm_matrix(&scaled).map(Self::from_matrix_unchecked)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator::from_matrix_unchecked(&self.mat + &rhs.mat)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator::from_matrix_unchecked(&self.mat - &rhs.mat)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator::from_matrix_unchecked(&self.mat * &rhs.mat)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator::from_matrix_unchecked(-&self.mat)
    }
}

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        self.mat += &rhs.mat;
    }
}

impl SubAssign<&Operator> for Operator {
    fn sub_assign(&mut self, rhs: &Operator) {
        self.mat -= &rhs.mat;
    }
}
