//! Linear and antilinear operators as `matrix + conjugation flag`.
//!
//! An antilinear operator acts as `v -> M · conj(v)`. Composition pushes the
//! conjugation through the right-hand matrix, so the set is closed:
//!
//! ```text
//! (A ∘ B).matrix     = A.matrix · (A.conjugates ? conj(B.matrix) : B.matrix)
//! (A ∘ B).conjugates = A.conjugates XOR B.conjugates
//! ```
//!
//! The scalar type is generic so that integral operators (the symmetry
//! co-representations) are composed with exact `i64` arithmetic.

use std::ops::Neg;

use nalgebra::{ClosedAddAssign, ClosedMulAssign, DMatrix, DVector, Scalar};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalars with a complex conjugation (the identity on real types).
pub trait Conjugate:
    Scalar + Copy + num_traits::Zero + num_traits::One + ClosedAddAssign + ClosedMulAssign + Neg<Output = Self>
{
    fn conjugate(self) -> Self;
}

impl Conjugate for i64 {
    fn conjugate(self) -> Self {
        self
    }
}

impl Conjugate for f64 {
    fn conjugate(self) -> Self {
        self
    }
}

impl Conjugate for Complex64 {
    fn conjugate(self) -> Self {
        self.conj()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntilinearOperator<T: Scalar = Complex64> {
    matrix: DMatrix<T>,
    conjugates: bool,
}

impl<T: Conjugate> AntilinearOperator<T> {
    pub fn new(matrix: DMatrix<T>, conjugates: bool) -> Self {
        assert!(matrix.is_square(), "operator matrix must be square");
        Self { matrix, conjugates }
    }

    pub fn linear(matrix: DMatrix<T>) -> Self {
        Self::new(matrix, false)
    }

    pub fn antilinear(matrix: DMatrix<T>) -> Self {
        Self::new(matrix, true)
    }

    pub fn identity(dim: usize) -> Self {
        Self::linear(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn conjugates(&self) -> bool {
        self.conjugates
    }

    pub fn apply(&self, v: &DVector<T>) -> DVector<T> {
        if self.conjugates {
            &self.matrix * v.map(Conjugate::conjugate)
        } else {
            &self.matrix * v
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        let rhs = if self.conjugates {
            other.matrix.map(Conjugate::conjugate)
        } else {
            other.matrix.clone()
        };
        Self {
            matrix: &self.matrix * rhs,
            conjugates: self.conjugates ^ other.conjugates,
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            matrix: self.matrix.map(|x| x * factor),
            conjugates: self.conjugates,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            matrix: self.matrix.map(|x| -x),
            conjugates: self.conjugates,
        }
    }

    /// `M · M^dagger == I`, exactly.
    pub fn has_unitary_matrix_exact(&self) -> bool {
        let adj = self.matrix.transpose().map(Conjugate::conjugate);
        &self.matrix * adj == DMatrix::identity(self.dim(), self.dim())
    }
}

impl AntilinearOperator<i64> {
    pub fn to_complex(&self) -> AntilinearOperator<Complex64> {
        AntilinearOperator {
            matrix: self.matrix.map(|x| Complex64::new(x as f64, 0.0)),
            conjugates: self.conjugates,
        }
    }
}

impl AntilinearOperator<Complex64> {
    /// Inverse: for `A = M·K`, `A⁻¹ = K·M⁻¹ = conj(M⁻¹)·K`.
    pub fn inverse(&self) -> Result<Self> {
        let inv = self.matrix.clone().try_inverse().ok_or(Error::Singular)?;
        let matrix = if self.conjugates {
            inv.map(|z| z.conj())
        } else {
            inv
        };
        Ok(Self {
            matrix,
            conjugates: self.conjugates,
        })
    }

    /// Largest entry of `|M · M^dagger - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let prod = &self.matrix * self.matrix.adjoint();
        (prod - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_antiunitary(&self, tol: f64) -> bool {
        self.conjugates && self.unitarity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        !self.conjugates && self.unitarity_defect() <= tol
    }

    /// Largest entry of `|self.matrix - other.matrix|`; infinite when the
    /// conjugation flags differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.conjugates != other.conjugates || self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Block-diagonal `diag(m, m, ...)` with `copies` copies.
pub fn block_diagonal<T: Conjugate>(m: &DMatrix<T>, copies: usize) -> DMatrix<T> {
    let d = m.nrows();
    let mut out = DMatrix::zeros(d * copies, d * copies);
    for k in 0..copies {
        out.view_mut((k * d, k * d), (d, d)).copy_from(m);
    }
    out
}

/// `[[a, b], [c, d]]` from four equally sized square blocks.
pub fn block_2x2<T: Conjugate>(
    a: &DMatrix<T>,
    b: &DMatrix<T>,
    c: &DMatrix<T>,
    d: &DMatrix<T>,
) -> DMatrix<T> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}
