//! Linear subspaces in reduced row echelon form.
//!
//! The RREF basis is a canonical representative: two subspaces are equal
//! exactly when their basis matrices are identical.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    field: FieldSpec,
    /// RREF matrix whose rows are the basis; no zero rows.
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize, field: FieldSpec) -> Self {
        Subspace {
            ambient,
            field,
            basis: Matrix::zeros(0, ambient, field),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize, field: FieldSpec) -> Self {
        Subspace {
            ambient,
            field,
            basis: Matrix::identity(ambient, field),
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonicalizes a spanning set. Vectors of the wrong length are a
    /// programmer error and panic.
    pub fn from_spanning(ambient: usize, field: FieldSpec, vectors: &[Vec<Scalar>]) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "spanning vector length mismatch");
        }
        let stacked = Matrix::from_rows(field, vectors.to_vec())
            .expect("spanning vectors share the ambient dimension");
        let red = if stacked.rows() == 0 {
            return Subspace::zero(ambient, field);
        } else {
            stacked.rref()
        };
        let basis = Matrix::from_fn(red.rank, ambient, field, |r, c| {
            red.matrix.get(r, c).clone()
        });
        Subspace {
            ambient,
            field,
            basis,
            pivots: red.pivots,
        }
    }

    /// The kernel {v : m v = 0}, with dimension cols - rank.
    pub fn kernel_of(m: &Matrix) -> Self {
        let n = m.cols();
        let field = m.field();
        let red = m.rref();
        let pivot_set: Vec<usize> = red.pivots.clone();
        let mut vectors = Vec::new();
        for free in 0..n {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = crate::matrix::zero_vector(n, field);
            v[free] = Scalar::one(field);
            for (row, &p) in pivot_set.iter().enumerate() {
                v[p] = -red.matrix.get(row, free);
            }
            vectors.push(v);
        }
        let ker = Subspace::from_spanning(n, field, &vectors);
        debug_assert_eq!(ker.dim(), n - red.rank);
        ker
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                context: "subspace ambient dimension",
                expected: self.ambient,
                found: other.ambient,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                context: "vector length",
                expected: self.ambient,
                found: v.len(),
            });
        }
        for s in v {
            if s.field() != self.field {
                return Err(Error::FieldMismatch {
                    left: self.field,
                    right: s.field(),
                });
            }
        }
        // Reduce against the RREF basis; the remainder is zero iff v lies in
        // the row space.
        let mut w = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if !w[p].is_zero() {
                let c = w[p].clone();
                for j in 0..self.ambient {
                    w[j] = &w[j] - &(&c * self.basis.get(row, j));
                }
            }
        }
        Ok(w.iter().all(Scalar::is_zero))
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for row in other.basis_rows() {
            if !self.contains_vector(&row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Ok(Subspace::from_spanning(self.ambient, self.field, &rows))
    }

    /// Rows annihilating the subspace: S = {x : C x = 0}.
    pub fn constraint_matrix(&self) -> Matrix {
        if self.dim() == self.ambient {
            return Matrix::zeros(0, self.ambient, self.field);
        }
        Subspace::kernel_of(&self.basis).basis
    }

    /// Intersection via the kernel of the stacked constraint systems.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let c1 = self.constraint_matrix();
        let c2 = other.constraint_matrix();
        let stacked = Matrix::vstack(self.field, self.ambient, &[&c1, &c2]);
        if stacked.rows() == 0 {
            return Ok(Subspace::full(self.ambient, self.field));
        }
        Ok(Subspace::kernel_of(&stacked))
    }
}
