//! Algebras presented by structure constants: products, structural flags,
//! subspace products, the lower central series, the center, and the
//! filtration-adapted basis (generators first, deeper layers last).
//!
//! Tables are not assumed anticommutative; the chain and commutative example
//! algebras are first-class citizens. Lie-specific operations check the
//! cached structural flags and refuse when they do not hold.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linmap::LinearMap;
use crate::matrix::{basis_vector, vec_add, vec_is_zero, zero_vector, Matrix};
use crate::subspace::Subspace;

/// Sparse right-hand side of one basis product: sorted `(k, c)` pairs with
/// nonzero `c`, meaning `e_i e_j = sum c * e_k`.
pub type ProductRhs = Vec<(usize, Scalar)>;

#[derive(Debug)]
pub struct AlgebraTable {
    name: String,
    dim: usize,
    field: FieldSpec,
    products: BTreeMap<(usize, usize), ProductRhs>,
    structure: OnceLock<StructureReport>,
}

impl Clone for AlgebraTable {
    fn clone(&self) -> Self {
        let structure = OnceLock::new();
        if let Some(r) = self.structure.get() {
            let _ = structure.set(*r);
        }
        AlgebraTable {
            name: self.name.clone(),
            dim: self.dim,
            field: self.field,
            products: self.products.clone(),
            structure,
        }
    }
}

impl PartialEq for AlgebraTable {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.same_structure(other)
    }
}

/// Structural flags, each established by an exhaustive check over basis
/// tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureReport {
    pub anticommutative: bool,
    pub commutative: bool,
    pub jacobi: bool,
}

/// Lower central series with the center and the nilpotency verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    /// Layers starting at the whole algebra; the last entry is either zero
    /// (nilpotent) or the first repeated layer (not nilpotent).
    pub layers: Vec<Subspace>,
    pub nilindex: Nilindex,
    pub center: Subspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilindex {
    Finite(usize),
    NotNilpotent,
}

impl std::fmt::Display for Nilindex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Nilindex::Finite(p) => write!(f, "{p}"),
            Nilindex::NotNilpotent => write!(f, "not nilpotent"),
        }
    }
}

/// Change of basis into filtration-adapted coordinates: positions below
/// `generator_count` complement the derived subalgebra, later blocks descend
/// through the central series with the deepest layer last.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    change: LinearMap,
    inverse: LinearMap,
    generator_count: usize,
    /// Half-open position ranges: generators, then one block per layer
    /// difference, deepest last.
    blocks: Vec<(usize, usize)>,
    nilindex: usize,
}

impl AdaptedBasis {
    pub fn change_of_basis(&self) -> &LinearMap {
        &self.change
    }

    pub fn inverse_change(&self) -> &LinearMap {
        &self.inverse
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn nilindex(&self) -> usize {
        self.nilindex
    }

    pub fn dim(&self) -> usize {
        self.change.dim()
    }

    /// Original coordinates of the q-th adapted basis vector.
    pub fn basis_vector_original(&self, q: usize) -> Vec<Scalar> {
        self.change.column(q)
    }

    pub fn to_adapted_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.inverse.apply(v)
    }

    pub fn to_original_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.change.apply(v)
    }

    pub fn to_adapted_map(&self, m: &LinearMap) -> LinearMap {
        self.inverse.compose(m).compose(&self.change)
    }

    pub fn to_original_map(&self, m: &LinearMap) -> LinearMap {
        self.change.compose(m).compose(&self.inverse)
    }
}

impl AlgebraTable {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        field: FieldSpec,
        products: BTreeMap<(usize, usize), ProductRhs>,
    ) -> Result<Self> {
        for (&(i, j), rhs) in &products {
            for &idx in &[i, j] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx + 1, dim });
                }
            }
            let mut seen = Vec::new();
            for (k, c) in rhs {
                if *k >= dim {
                    return Err(Error::IndexOutOfRange {
                        index: *k + 1,
                        dim,
                    });
                }
                if seen.contains(k) {
                    return Err(Error::DuplicateProduct { i: i + 1, j: j + 1 });
                }
                seen.push(*k);
                if c.is_zero() {
                    return Err(Error::InvalidScalar {
                        text: c.serialized(),
                        field,
                        reason: "stored structure constants must be nonzero".into(),
                    });
                }
                if c.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: c.field(),
                    });
                }
            }
        }
        let mut products = products;
        for rhs in products.values_mut() {
            rhs.sort_by_key(|(k, _)| *k);
        }
        Ok(AlgebraTable {
            name: name.into(),
            dim,
            field,
            products,
            structure: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), ProductRhs> {
        &self.products
    }

    /// Same dimension, field and structure constants; the name is ignored.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.dim == other.dim && self.field == other.field && self.products == other.products
    }

    /// Product of two basis vectors as a dense vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = zero_vector(self.dim, self.field);
        if let Some(rhs) = self.products.get(&(i, j)) {
            for (k, c) in rhs {
                out[*k] = c.clone();
            }
        }
        out
    }

    /// Bilinear extension of the table.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        let mut out = zero_vector(self.dim, self.field);
        for (&(i, j), rhs) in &self.products {
            if x[i].is_zero() || y[j].is_zero() {
                continue;
            }
            let coeff = &x[i] * &y[j];
            for (k, c) in rhs {
                out[*k] = &out[*k] + &(&coeff * c);
            }
        }
        Ok(out)
    }

    /// Product [v, e_j] for a vector v.
    pub fn bracket_vec_basis(&self, v: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut out = zero_vector(self.dim, self.field);
        for i in 0..self.dim {
            if v[i].is_zero() {
                continue;
            }
            if let Some(rhs) = self.products.get(&(i, j)) {
                for (k, c) in rhs {
                    out[*k] = &out[*k] + &(&v[i] * c);
                }
            }
        }
        out
    }

    /// Product [e_i, v] for a vector v.
    pub fn bracket_basis_vec(&self, i: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vector(self.dim, self.field);
        for j in 0..self.dim {
            if v[j].is_zero() {
                continue;
            }
            if let Some(rhs) = self.products.get(&(i, j)) {
                for (k, c) in rhs {
                    out[*k] = &out[*k] + &(&v[j] * c);
                }
            }
        }
        out
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "vector length",
                expected: self.dim,
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
        Ok(())
    }

    /// Structural flags, computed once and cached. A benign race recomputes
    /// the same value.
    pub fn check_structure(&self) -> StructureReport {
        *self.structure.get_or_init(|| {
            let n = self.dim;
            let mut anticommutative = true;
            let mut commutative = true;
            for i in 0..n {
                if !vec_is_zero(&self.bracket_basis(i, i)) {
                    anticommutative = false;
                }
                for j in 0..n {
                    let ij = self.bracket_basis(i, j);
                    let ji = self.bracket_basis(j, i);
                    if ij != ji {
                        commutative = false;
                    }
                    let neg_ji: Vec<Scalar> = ji.iter().map(|s| -s).collect();
                    if ij != neg_ji {
                        anticommutative = false;
                    }
                }
            }
            let mut jacobi = true;
            'outer: for i in 0..n {
                for j in 0..n {
                    let ij = self.bracket_basis(i, j);
                    for k in 0..n {
                        let jk = self.bracket_basis(j, k);
                        let ki = self.bracket_basis(k, i);
                        let mut sum = self.bracket_vec_basis(&ij, k);
                        sum = vec_add(&sum, &self.bracket_vec_basis(&jk, i));
                        sum = vec_add(&sum, &self.bracket_vec_basis(&ki, j));
                        if !vec_is_zero(&sum) {
                            jacobi = false;
                            break 'outer;
                        }
                    }
                }
            }
            StructureReport {
                anticommutative,
                commutative,
                jacobi,
            }
        })
    }

    pub fn is_lie(&self) -> bool {
        let s = self.check_structure();
        s.anticommutative && s.jacobi
    }

    /// Span of all products of basis pairs from u and v; both orders are
    /// taken unless the table is anticommutative.
    pub fn product_subspace(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        if u.ambient_dim() != self.dim || v.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "product subspace ambient",
                expected: self.dim,
                found: u.ambient_dim().max(v.ambient_dim()),
            });
        }
        let mut vectors = Vec::new();
        let both_orders = !self.check_structure().anticommutative;
        for a in u.basis_rows() {
            for b in v.basis_rows() {
                vectors.push(self.bracket(&a, &b)?);
                if both_orders {
                    vectors.push(self.bracket(&b, &a)?);
                }
            }
        }
        Ok(Subspace::from_spanning(self.dim, self.field, &vectors))
    }

    /// Two-sided annihilator; for Lie tables this is the usual center.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        // Stack, over all j and output coordinates k, the rows of the
        // left- and right-multiplication constraints on x.
        let mut rows = Vec::new();
        for j in 0..n {
            let mut left = vec![zero_vector(n, self.field); n];
            let mut right = vec![zero_vector(n, self.field); n];
            for i in 0..n {
                if let Some(rhs) = self.products.get(&(i, j)) {
                    for (k, c) in rhs {
                        left[*k][i] = &left[*k][i] + c;
                    }
                }
                if let Some(rhs) = self.products.get(&(j, i)) {
                    for (k, c) in rhs {
                        right[*k][i] = &right[*k][i] + c;
                    }
                }
            }
            rows.extend(left.into_iter().filter(|r| !vec_is_zero(r)));
            rows.extend(right.into_iter().filter(|r| !vec_is_zero(r)));
        }
        if rows.is_empty() {
            return Subspace::full(n, self.field);
        }
        let m = Matrix::from_rows(self.field, rows).expect("constraint rows share length");
        Subspace::kernel_of(&m)
    }

    /// Layers until stabilization, the center and the nilindex.
    pub fn lower_central_series(&self) -> SeriesReport {
        let full = Subspace::full(self.dim, self.field);
        let mut layers = vec![full.clone()];
        let nilindex = loop {
            let last = layers.last().unwrap();
            let next = self
                .product_subspace(&full, last)
                .expect("ambient dimensions agree");
            if next.is_zero() {
                layers.push(next);
                break Nilindex::Finite(layers.len());
            }
            if next.dim() == last.dim() {
                layers.push(next);
                break Nilindex::NotNilpotent;
            }
            layers.push(next);
        };
        SeriesReport {
            layers,
            nilindex,
            center: self.center(),
        }
    }

    /// Derived subalgebra: the span of all products.
    pub fn derived_subspace(&self) -> Subspace {
        let full = Subspace::full(self.dim, self.field);
        self.product_subspace(&full, &full)
            .expect("ambient dimensions agree")
    }

    /// Rewrites the table in the basis given by the columns of `change`.
    pub fn transformed(&self, change: &LinearMap) -> Result<AlgebraTable> {
        let n = self.dim;
        let inverse = change.inverse().ok_or(Error::NonSquareMatrix {
            rows: n,
            cols: n,
        })?;
        let mut products = BTreeMap::new();
        for i in 0..n {
            let ci = change.column(i);
            for j in 0..n {
                let cj = change.column(j);
                let w = self.bracket(&ci, &cj)?;
                if vec_is_zero(&w) {
                    continue;
                }
                let coords = inverse.apply(&w);
                let rhs: ProductRhs = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                products.insert((i, j), rhs);
            }
        }
        AlgebraTable::new(self.name.clone(), n, self.field, products)
    }

    /// Filtration-adapted basis: generators (a complement of the derived
    /// subalgebra) first, then for each k a complement of the (k+1)-th layer
    /// inside the k-th, with the deepest layer last. Deterministic because
    /// every layer is taken in RREF and extensions pick the rows whose pivot
    /// leaves the deeper pivot set.
    pub fn adapted_basis(&self) -> Result<(AlgebraTable, AdaptedBasis)> {
        let series = self.lower_central_series();
        let p = match series.nilindex {
            Nilindex::Finite(p) => p,
            Nilindex::NotNilpotent => return Err(Error::NotNilpotent),
        };
        let n = self.dim;
        let mut new_basis: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        let mut blocks = Vec::new();
        // layers[k-1] is the k-th layer; layers[p-1] is zero.
        for k in 1..p {
            let this = &series.layers[k - 1];
            let deeper = &series.layers[k];
            let start = new_basis.len();
            let deeper_pivots = deeper.pivots();
            for (row, &piv) in this.pivots().iter().enumerate() {
                if !deeper_pivots.contains(&piv) {
                    new_basis.push(this.basis_matrix().row(row).to_vec());
                }
            }
            blocks.push((start, new_basis.len()));
        }
        assert_eq!(new_basis.len(), n, "layer complements fill the space");
        let generator_count = blocks[0].1;
        let mut change_mat = Matrix::zeros(n, n, self.field);
        for (q, vec) in new_basis.iter().enumerate() {
            for (r, s) in vec.iter().enumerate() {
                change_mat.set(r, q, s.clone());
            }
        }
        let change = LinearMap::from_matrix(change_mat)?;
        let inverse = change.inverse().expect("adapted basis is invertible");
        let table = self.transformed(&change)?;
        let adapted = AdaptedBasis {
            change,
            inverse,
            generator_count,
            blocks,
            nilindex: p,
        };
        Ok((table, adapted))
    }
}

/// How the one-sided products of a source table are completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    /// Add `e_j e_i = -(e_i e_j)`; nonzero `e_i e_i` is rejected.
    Skew,
    /// Add `e_j e_i = e_i e_j`.
    Symmetric,
    /// Store exactly what was given.
    None,
}

impl Completion {
    pub fn parse(text: &str) -> Option<Completion> {
        match text {
            "skew" => Some(Completion::Skew),
            "symmetric" => Some(Completion::Symmetric),
            "none" => Some(Completion::None),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Completion::Skew => "skew",
            Completion::Symmetric => "symmetric",
            Completion::None => "none",
        }
    }
}

/// Incremental construction of an [`AlgebraTable`], shared by the catalog
/// builders and the parsers.
#[derive(Debug)]
pub struct TableBuilder {
    name: String,
    dim: usize,
    field: FieldSpec,
    products: BTreeMap<(usize, usize), ProductRhs>,
}

impl TableBuilder {
    pub fn new(name: impl Into<String>, dim: usize, field: FieldSpec) -> Self {
        TableBuilder {
            name: name.into(),
            dim,
            field,
            products: BTreeMap::new(),
        }
    }

    /// Records `e_i e_j = rhs` (0-based). Zero coefficients are dropped; an
    /// all-zero rhs records nothing. Duplicate left-hand sides are rejected.
    pub fn product(&mut self, i: usize, j: usize, rhs: ProductRhs) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i.max(j) + 1,
                dim: self.dim,
            });
        }
        if self.products.contains_key(&(i, j)) {
            return Err(Error::DuplicateProduct { i: i + 1, j: j + 1 });
        }
        let rhs: ProductRhs = rhs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if rhs.is_empty() {
            return Ok(());
        }
        self.products.insert((i, j), rhs);
        Ok(())
    }

    /// Applies the completion rule over the currently stored products.
    pub fn complete(&mut self, completion: Completion) -> Result<()> {
        if completion == Completion::None {
            return Ok(());
        }
        let stored: Vec<((usize, usize), ProductRhs)> = self
            .products
            .iter()
            .map(|(&k, v)| (k, v.clone()))
            .collect();
        for ((i, j), rhs) in stored {
            if i == j {
                if completion == Completion::Skew {
                    return Err(Error::AlternatingViolated { i: i + 1 });
                }
                continue;
            }
            let mirrored: ProductRhs = match completion {
                Completion::Skew => rhs.iter().map(|(k, c)| (*k, -c)).collect(),
                Completion::Symmetric => rhs.clone(),
                Completion::None => unreachable!(),
            };
            match self.products.get(&(j, i)) {
                Some(existing) => {
                    let mut sorted = mirrored.clone();
                    sorted.sort_by_key(|(k, _)| *k);
                    let mut existing_sorted = existing.clone();
                    existing_sorted.sort_by_key(|(k, _)| *k);
                    if existing_sorted != sorted {
                        return Err(Error::CompletionConflict { i: j + 1, j: i + 1 });
                    }
                }
                None => {
                    self.products.insert((j, i), mirrored);
                }
            }
        }
        Ok(())
    }

    pub fn build(self) -> Result<AlgebraTable> {
        AlgebraTable::new(self.name, self.dim, self.field, self.products)
    }
}

/// The map agreeing with `f` on the listed basis positions and zero on the
/// others.
pub fn restrict_map(f: &LinearMap, positions: &[usize]) -> LinearMap {
    let n = f.dim();
    let mut out = LinearMap::zero(n, f.field());
    for &j in positions {
        assert!(j < n, "restriction position out of range");
        out.set_column(j, &f.column(j));
    }
    out
}

/// Convenience: the standard basis vector of an algebra.
pub fn algebra_basis_vector(a: &AlgebraTable, i: usize) -> Vec<Scalar> {
    basis_vector(a.dim(), i, a.field())
}
