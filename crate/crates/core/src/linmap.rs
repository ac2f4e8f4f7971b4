//! Square linear maps on the algebra's underlying space.
//!
//! Column `j` of the matrix is the image of the j-th basis vector.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    mat: Matrix,
}

impl LinearMap {
    pub fn from_matrix(mat: Matrix) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::NonSquareMatrix {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        Ok(LinearMap { mat })
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        LinearMap {
            mat: Matrix::identity(n, field),
        }
    }

    pub fn zero(n: usize, field: FieldSpec) -> Self {
        LinearMap {
            mat: Matrix::zeros(n, n, field),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.mat.field()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.mat.apply(v)
    }

    /// Image of the j-th basis vector.
    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.mat.column(j)
    }

    pub fn set_column(&mut self, j: usize, v: &[Scalar]) {
        assert_eq!(v.len(), self.dim());
        for (r, s) in v.iter().enumerate() {
            self.mat.set(r, j, s.clone());
        }
    }

    /// self ∘ inner
    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        LinearMap {
            mat: self.mat.mul(&inner.mat),
        }
    }

    pub fn add(&self, rhs: &LinearMap) -> LinearMap {
        LinearMap {
            mat: self.mat.add(&rhs.mat),
        }
    }

    pub fn sub(&self, rhs: &LinearMap) -> LinearMap {
        LinearMap {
            mat: self.mat.sub(&rhs.mat),
        }
    }

    pub fn scale(&self, s: &Scalar) -> LinearMap {
        LinearMap {
            mat: self.mat.scale(s),
        }
    }

    pub fn neg(&self) -> LinearMap {
        self.scale(&-&Scalar::one(self.field()))
    }

    pub fn pow(&self, k: usize) -> LinearMap {
        LinearMap {
            mat: self.mat.pow(k),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        self.mat.inverse().map(|mat| LinearMap { mat })
    }

    /// Row-major flattening into the n^2-dimensional endomorphism space;
    /// entry (r, c) lands at index r*n + c.
    pub fn flatten(&self) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            out.extend(self.mat.row(r).iter().cloned());
        }
        out
    }

    pub fn from_flat(n: usize, field: FieldSpec, data: &[Scalar]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "flattened map length",
                expected: n * n,
                found: data.len(),
            });
        }
        let mat = Matrix::from_fn(n, n, field, |r, c| data[r * n + c].clone());
        Ok(LinearMap { mat })
    }

    /// Index of nilpotency: smallest q with self^q = 0, or `None` if the map
    /// is not nilpotent (q can never exceed the dimension).
    pub fn nilpotency_index(&self) -> Option<usize> {
        let n = self.dim();
        let mut power = LinearMap::identity(n, self.field());
        for q in 0..=n {
            if power.is_zero() {
                return Some(q);
            }
            power = power.compose(self);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::basis_vector;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn flatten_round_trip() {
        let mut m = LinearMap::zero(3, q());
        m.set_column(0, &basis_vector(3, 1, q()));
        m.set_column(2, &basis_vector(3, 0, q()));
        let flat = m.flatten();
        assert_eq!(LinearMap::from_flat(3, q(), &flat).unwrap(), m);
    }

    #[test]
    fn nilpotency_index() {
        let mut shift = LinearMap::zero(3, q());
        shift.set_column(0, &basis_vector(3, 1, q()));
        shift.set_column(1, &basis_vector(3, 2, q()));
        assert_eq!(shift.nilpotency_index(), Some(3));
        assert_eq!(LinearMap::zero(2, q()).nilpotency_index(), Some(1));
        assert_eq!(LinearMap::identity(2, q()).nilpotency_index(), None);
    }
}
