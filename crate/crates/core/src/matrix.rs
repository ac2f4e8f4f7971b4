//! Dense matrices over an exact field, with Gauss-Jordan elimination.
//!
//! Shapes are a programmer contract: shape mismatches panic. Field
//! consistency of user-supplied data is validated at construction.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

/// Result of reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: ncols,
                    found: row.len(),
                });
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: s.field(),
                    });
                }
                entries.push(s.clone());
            }
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            field,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let s = f(r, c);
                debug_assert_eq!(s.field(), field);
                entries.push(s);
            }
        }
        Matrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        assert_eq!(value.field(), self.field);
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        assert!(r < self.rows);
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |r, c| {
            self.get(c, r).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.get(r, c) + rhs.get(r, c)
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.get(r, c) - rhs.get(r, c)
        })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| self.get(r, c) * s)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, rhs.cols, self.field, |r, c| {
            let mut acc = Scalar::zero(self.field);
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * rhs.get(k, c));
            }
            acc
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero(self.field);
                for (c, x) in v.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    acc = &acc + &(self.get(r, c) * x);
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(r, c) * s;
            self.entries[r * self.cols + c] = v;
        }
    }

    /// row_i -= factor * row_src
    fn row_sub_scaled(&mut self, i: usize, src: usize, factor: &Scalar) {
        for c in 0..self.cols {
            let v = self.get(i, c) - &(factor * self.get(src, c));
            self.entries[i * self.cols + c] = v;
        }
    }

    /// Gauss-Jordan elimination to the unique reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).inverse().expect("pivot is nonzero");
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let factor = m.get(i, c).clone();
                    m.row_sub_scaled(i, r, &factor);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solves `self * x = b`. Returns the particular solution with all free
    /// variables set to zero, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let red = aug.rref();
        if red.pivots.last().is_some_and(|&p| p == self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (row, &p) in red.pivots.iter().enumerate() {
            x[p] = red.matrix.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.field);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one(self.field));
        }
        let red = aug.rref();
        // the identity block keeps the rank at n; singularity shows up as a
        // pivot escaping into the right half
        if red.pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(Matrix::from_fn(n, n, self.field, |r, c| {
            red.matrix.get(r, n + c).clone()
        }))
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows, self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Stacks matrices vertically; all must share the column count and field.
    pub fn vstack(field: FieldSpec, cols: usize, blocks: &[&Matrix]) -> Matrix {
        let total: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(total, cols, field);
        let mut r0 = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            assert_eq!(b.field, field);
            for r in 0..b.rows {
                for c in 0..cols {
                    out.set(r0 + r, c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
        }
        out
    }
}

// --- vector helpers -------------------------------------------------------

pub fn zero_vector(n: usize, field: FieldSpec) -> Vec<Scalar> {
    vec![Scalar::zero(field); n]
}

pub fn basis_vector(n: usize, i: usize, field: FieldSpec) -> Vec<Scalar> {
    assert!(i < n);
    let mut v = zero_vector(n, field);
    v[i] = Scalar::one(field);
    v
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(s: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| s * x).collect()
}

pub fn vec_neg(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| -x).collect()
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Renders a vector as a combination of basis labels, e.g. `e1 - 2*e3`.
pub fn format_vector(v: &[Scalar]) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative_rational();
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs.is_one() {
            out.push_str(&format!("e{}", i + 1));
        } else {
            out.push_str(&format!("{}*e{}", abs.coefficient_string(), i + 1));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn parse_vector(text: &str, n: usize, field: FieldSpec) -> Result<Vec<Scalar>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return Err(Error::DimensionMismatch {
            context: "vector entry count",
            expected: n,
            found: parts.len(),
        });
    }
    parts.iter().map(|p| Scalar::parse(p, field)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn qm(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            q(),
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v, q())).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_proportional_rows() {
        let m = qm(&[&[1, 2], &[2, 4]]);
        let red = m.rref();
        assert_eq!(red.rank, 1);
        assert_eq!(red.matrix, qm(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_identity() {
        let m = Matrix::identity(3, q());
        let red = m.rref();
        assert_eq!(red.rank, 3);
        assert_eq!(red.pivots, vec![0, 1, 2]);
        assert_eq!(red.matrix, m);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = qm(&[&[2, 4, 1], &[1, 2, 3], &[3, 6, 4]]);
        let once = m.rref().matrix;
        let twice = once.rref().matrix;
        assert_eq!(once, twice);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = Matrix::identity(3, q());
        let b: Vec<Scalar> = [5, -1, 2]
            .iter()
            .map(|&v| Scalar::from_int(v, q()))
            .collect();
        assert_eq!(id.solve(&b).unwrap(), b);

        let a = qm(&[&[1], &[2]]);
        let b: Vec<Scalar> = [1, 3].iter().map(|&v| Scalar::from_int(v, q())).collect();
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn solve_exactness() {
        let a = qm(&[&[2, 1, 0], &[0, 3, 1]]);
        let b: Vec<Scalar> = [1, 2].iter().map(|&v| Scalar::from_int(v, q())).collect();
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, q()));
        let singular = qm(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn gf2_elimination() {
        let f2 = FieldSpec::prime_field(2).unwrap();
        let m = Matrix::from_rows(
            f2,
            vec![
                vec![Scalar::one(f2), Scalar::one(f2), Scalar::zero(f2)],
                vec![Scalar::one(f2), Scalar::zero(f2), Scalar::one(f2)],
                vec![Scalar::zero(f2), Scalar::one(f2), Scalar::one(f2)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn vector_formatting() {
        let v = vec![
            Scalar::from_int(1, q()),
            Scalar::zero(q()),
            Scalar::from_fraction(-1, 3, q()).unwrap(),
        ];
        assert_eq!(format_vector(&v), "e1 - 1/3*e3");
        assert_eq!(format_vector(&zero_vector(2, q())), "0");
    }
}
