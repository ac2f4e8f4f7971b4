//! The derivation algebra as the kernel of the Leibniz linear system, plus
//! the named derivation families used by the local-derivation constructions:
//! inner derivations, central derivations, the two-weight grading derivation
//! on 2-step algebras, the subspace of derivations sending the derived
//! subalgebra into the center, and the two-generated construction.
//!
//! Maps on the endomorphism space are flattened row-major: the matrix entry
//! (r, c) of a candidate lands at index r*n + c.

use crate::algebra::{AdaptedBasis, AlgebraTable};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linmap::LinearMap;
use crate::matrix::{vec_add, vec_is_zero, vec_neg, vec_sub, zero_vector, Matrix};
use crate::subspace::Subspace;

/// Outcome of a Leibniz check: either the identity holds on all basis pairs,
/// or the first violating pair is reported together with the residual
/// d(e_i e_j) - (d e_i) e_j - e_i (d e_j).
#[derive(Debug, Clone)]
pub struct DerivationCheck {
    pub ok: bool,
    pub failure: Option<LeibnizFailureAt>,
}

#[derive(Debug, Clone)]
pub struct LeibnizFailureAt {
    pub i: usize,
    pub j: usize,
    pub residual: Vec<Scalar>,
}

/// Basis of Der(a) with its flattened image in the endomorphism space.
#[derive(Debug, Clone)]
pub struct DerivationBasis {
    pub maps: Vec<LinearMap>,
    pub subspace: Subspace,
}

impl DerivationBasis {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// Evaluation {D(x) : D in Der} at a point.
    pub fn evaluate_at(&self, x: &[Scalar]) -> Subspace {
        evaluate_end_subspace_at(&self.subspace, x)
    }

    pub fn contains(&self, map: &LinearMap) -> Result<bool> {
        self.subspace.contains_vector(&map.flatten())
    }

    /// Renders the general element as a matrix over symbolic parameters
    /// t1..td, one parameter per basis derivation.
    pub fn parametrized_matrix(&self) -> Vec<Vec<String>> {
        let n = self.maps.first().map_or(0, |m| m.dim());
        let mut rows = vec![vec![String::new(); n]; n];
        for r in 0..n {
            for c in 0..n {
                let mut terms = String::new();
                for (idx, m) in self.maps.iter().enumerate() {
                    let coeff = m.matrix().get(r, c);
                    if coeff.is_zero() {
                        continue;
                    }
                    let neg = coeff.is_negative_rational();
                    let abs = if neg { -coeff } else { coeff.clone() };
                    if terms.is_empty() {
                        if neg {
                            terms.push('-');
                        }
                    } else {
                        terms.push_str(if neg { " - " } else { " + " });
                    }
                    if abs.is_one() {
                        terms.push_str(&format!("t{}", idx + 1));
                    } else {
                        terms.push_str(&format!("{}*t{}", abs.coefficient_string(), idx + 1));
                    }
                }
                if terms.is_empty() {
                    terms.push('0');
                }
                rows[r][c] = terms;
            }
        }
        rows
    }
}

fn check_map_shape(a: &AlgebraTable, d: &LinearMap) -> Result<()> {
    if d.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "map dimension",
            expected: a.dim(),
            found: d.dim(),
        });
    }
    if d.field() != a.field() {
        return Err(Error::FieldMismatch {
            left: a.field(),
            right: d.field(),
        });
    }
    Ok(())
}

/// f(xy) - (f x)y - x(f y) for arbitrary vectors.
pub fn leibniz_residual(
    a: &AlgebraTable,
    f: &LinearMap,
    x: &[Scalar],
    y: &[Scalar],
) -> Result<Vec<Scalar>> {
    check_map_shape(a, f)?;
    let lhs = f.apply(&a.bracket(x, y)?);
    let rhs = vec_add(&a.bracket(&f.apply(x), y)?, &a.bracket(x, &f.apply(y))?);
    Ok(vec_sub(&lhs, &rhs))
}

/// Leibniz identity on all ordered basis pairs.
pub fn is_derivation(a: &AlgebraTable, d: &LinearMap) -> Result<DerivationCheck> {
    check_map_shape(a, d)?;
    let n = a.dim();
    for i in 0..n {
        let di = d.column(i);
        for j in 0..n {
            let dj = d.column(j);
            let lhs = d.apply(&a.bracket_basis(i, j));
            let rhs = vec_add(&a.bracket_vec_basis(&di, j), &a.bracket_basis_vec(i, &dj));
            let residual = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&residual) {
                return Ok(DerivationCheck {
                    ok: false,
                    failure: Some(LeibnizFailureAt { i, j, residual }),
                });
            }
        }
    }
    Ok(DerivationCheck {
        ok: true,
        failure: None,
    })
}

/// Rows of the Leibniz system over the n^2 unknown entries of a candidate
/// map, one constraint row per (pair, output coordinate). For
/// anticommutative tables the pairs i < j suffice; otherwise all ordered
/// pairs are used.
fn leibniz_rows(a: &AlgebraTable) -> Vec<Vec<Scalar>> {
    let n = a.dim();
    let field = a.field();
    let anticommutative = a.check_structure().anticommutative;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if anticommutative && i >= j {
                continue;
            }
            let mut pair_rows = vec![zero_vector(n * n, field); n];
            // + D(e_i e_j): coefficient of entry (k, l) is c_{ij}^l
            if let Some(rhs) = a.products().get(&(i, j)) {
                for (l, c) in rhs {
                    for (k, row) in pair_rows.iter_mut().enumerate() {
                        row[k * n + l] = &row[k * n + l] + c;
                    }
                }
            }
            // - (D e_i) e_j: coordinate k picks entry (l, i) with weight c_{lj}^k
            for l in 0..n {
                if let Some(rhs) = a.products().get(&(l, j)) {
                    for (k, c) in rhs {
                        pair_rows[*k][l * n + i] = &pair_rows[*k][l * n + i] - c;
                    }
                }
            }
            // - e_i (D e_j): coordinate k picks entry (l, j) with weight c_{il}^k
            for l in 0..n {
                if let Some(rhs) = a.products().get(&(i, l)) {
                    for (k, c) in rhs {
                        pair_rows[*k][l * n + j] = &pair_rows[*k][l * n + j] - c;
                    }
                }
            }
            rows.extend(pair_rows.into_iter().filter(|r| !vec_is_zero(r)));
        }
    }
    rows
}

/// The full Leibniz constraint matrix (exposed for the elimination oracle in
/// the test suite).
pub fn leibniz_system(a: &AlgebraTable) -> Matrix {
    let rows = leibniz_rows(a);
    if rows.is_empty() {
        return Matrix::zeros(0, a.dim() * a.dim(), a.field());
    }
    Matrix::from_rows(a.field(), rows).expect("constraint rows share length")
}

/// Der(a) as the kernel of the Leibniz system. Every returned basis map is
/// re-checked against the Leibniz identity.
pub fn derivation_space(a: &AlgebraTable) -> DerivationBasis {
    let n = a.dim();
    let system = leibniz_system(a);
    let subspace = if system.rows() == 0 {
        Subspace::full(n * n, a.field())
    } else {
        Subspace::kernel_of(&system)
    };
    let maps: Vec<LinearMap> = subspace
        .basis_rows()
        .into_iter()
        .map(|row| LinearMap::from_flat(n, a.field(), &row).expect("kernel rows have length n^2"))
        .collect();
    for m in &maps {
        let check = is_derivation(a, m).expect("shape is consistent");
        assert!(check.ok, "kernel element fails the Leibniz identity");
    }
    DerivationBasis { maps, subspace }
}

/// ad x = [x, -]. Requires a Lie table.
pub fn inner_derivation(a: &AlgebraTable, x: &[Scalar]) -> Result<LinearMap> {
    if !a.is_lie() {
        return Err(Error::NotLieTable {
            context: "inner derivation",
        });
    }
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "vector length",
            expected: a.dim(),
            found: x.len(),
        });
    }
    let mut m = LinearMap::zero(a.dim(), a.field());
    for j in 0..a.dim() {
        m.set_column(j, &a.bracket_vec_basis(x, j));
    }
    let check = is_derivation(a, &m)?;
    debug_assert!(check.ok, "ad x satisfies Leibniz on a Lie table");
    Ok(m)
}

/// Maps with image inside the center and the derived subalgebra inside the
/// kernel, as a subspace of the endomorphism space. Every element is a
/// derivation; the basis is re-verified.
pub fn central_derivation_space(a: &AlgebraTable) -> Subspace {
    let n = a.dim();
    let field = a.field();
    let center = a.center();
    let derived = a.derived_subspace();
    let cz = center.constraint_matrix();
    let mut rows = Vec::new();
    // image in the center: every column satisfies the center constraints
    for l in 0..n {
        for zr in 0..cz.rows() {
            let mut row = zero_vector(n * n, field);
            for k in 0..n {
                row[k * n + l] = cz.get(zr, k).clone();
            }
            rows.push(row);
        }
    }
    // derived subalgebra in the kernel: D w = 0 for basis vectors w
    for w in derived.basis_rows() {
        for k in 0..n {
            let mut row = zero_vector(n * n, field);
            for l in 0..n {
                row[k * n + l] = w[l].clone();
            }
            rows.push(row);
        }
    }
    let space = if rows.is_empty() {
        Subspace::full(n * n, field)
    } else {
        Subspace::kernel_of(&Matrix::from_rows(field, rows).expect("rows share length"))
    };
    for flat in space.basis_rows() {
        let m = LinearMap::from_flat(n, field, &flat).expect("length n^2");
        let check = is_derivation(a, &m).expect("shape is consistent");
        assert!(check.ok, "central map fails the Leibniz identity");
    }
    space
}

/// The adapted basis of a 2-step table, shared by several constructions.
pub(crate) fn two_step_adapted(a: &AlgebraTable) -> Result<(AlgebraTable, AdaptedBasis)> {
    let (table, adapted) = a.adapted_basis()?;
    if adapted.nilindex() != 3 {
        return Err(Error::WrongNilindex {
            expected: "3".into(),
            found: adapted.nilindex().to_string(),
        });
    }
    Ok((table, adapted))
}

/// The derivation acting as lambda on a generating complement and 2*lambda
/// on the derived subalgebra of a 2-step table.
pub fn grading_derivation(a: &AlgebraTable, lambda: &Scalar) -> Result<LinearMap> {
    if lambda.field() != a.field() {
        return Err(Error::FieldMismatch {
            left: a.field(),
            right: lambda.field(),
        });
    }
    let (_, adapted) = two_step_adapted(a)?;
    let n = a.dim();
    let m = adapted.generator_count();
    let two_lambda = &(lambda + lambda);
    let mut d = LinearMap::zero(n, a.field());
    for q in 0..n {
        let weight = if q < m { lambda } else { two_lambda };
        let mut col = zero_vector(n, a.field());
        col[q] = weight.clone();
        d.set_column(q, &col);
    }
    let out = adapted.to_original_map(&d);
    let check = is_derivation(a, &out)?;
    debug_assert!(check.ok, "grading map satisfies Leibniz on 2-step tables");
    Ok(out)
}

/// {D in Der : D(derived) inside the center}, as a subspace of the
/// endomorphism space.
pub fn center_targeting_space(a: &AlgebraTable) -> Subspace {
    let n = a.dim();
    let field = a.field();
    let mut rows = leibniz_rows(a);
    let center = a.center();
    let derived = a.derived_subspace();
    let cz = center.constraint_matrix();
    for w in derived.basis_rows() {
        for zr in 0..cz.rows() {
            let mut row = zero_vector(n * n, field);
            for k in 0..n {
                let zk = cz.get(zr, k);
                if zk.is_zero() {
                    continue;
                }
                for l in 0..n {
                    if w[l].is_zero() {
                        continue;
                    }
                    row[k * n + l] = &row[k * n + l] + &(zk * &w[l]);
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Subspace::full(n * n, field);
    }
    Subspace::kernel_of(&Matrix::from_rows(field, rows).expect("rows share length"))
}

/// For a two-generated nilpotent Lie table in adapted form, builds the
/// derivation sending one generator into the (p-2)-nd layer and the first
/// bracket monomial into the last layer; zero elsewhere.
///
/// Returns `Ok(None)` when no candidate works (anomalous for a nilpotent
/// two-generated table; surfaced to the caller rather than asserted).
pub fn two_generated_derivation(a: &AlgebraTable) -> Result<Option<LinearMap>> {
    if !a.is_lie() {
        return Err(Error::NotLieTable {
            context: "two-generated construction",
        });
    }
    let (table, adapted) = a.adapted_basis()?;
    let m = adapted.generator_count();
    if m != 2 {
        return Err(Error::WrongGeneratorCount {
            expected: 2,
            found: m,
        });
    }
    let p = adapted.nilindex();
    if p < 3 {
        return Err(Error::WrongNilindex {
            expected: ">= 3".into(),
            found: p.to_string(),
        });
    }
    let n = a.dim();
    let field = a.field();

    // Arrange the basis so the third vector is exactly [f1, f2]; for a
    // two-generated table the second block has dimension 1 and [f1, f2]
    // spans it modulo the third layer.
    let w = table.bracket_basis(0, 1);
    assert!(
        !vec_is_zero(&w),
        "generators of a two-generated nilpotent table have a nonzero bracket"
    );
    let blocks = adapted.blocks().to_vec();
    assert_eq!(blocks[1].1 - blocks[1].0, 1, "second layer block has rank 1");
    let mut rebase = Matrix::identity(n, field);
    for (r, s) in w.iter().enumerate() {
        rebase.set(r, 2, s.clone());
    }
    let rebase = LinearMap::from_matrix(rebase)?;
    let combined = adapted.change_of_basis().compose(&rebase);
    let table = a.transformed(&combined)?;
    let combined_inv = combined.inverse().expect("change of basis is invertible");

    let series = table.lower_central_series();
    let deep = &series.layers[p - 3]; // the (p-2)-nd layer, 0-based storage
    let mut candidates: Vec<Vec<Scalar>> = deep.basis_rows();
    let base = candidates.clone();
    for i in 0..base.len() {
        for j in (i + 1)..base.len() {
            candidates.push(vec_add(&base[i], &base[j]));
        }
    }

    for x in &candidates {
        let y1 = table.bracket_basis_vec(0, x);
        let y2 = table.bracket_basis_vec(1, x);
        let mut delta = LinearMap::zero(n, field);
        if !vec_is_zero(&y1) {
            delta.set_column(1, x);
            delta.set_column(2, &y1);
        } else if !vec_is_zero(&y2) {
            delta.set_column(0, &vec_neg(x));
            delta.set_column(2, &y2);
        } else {
            continue;
        }
        let check = is_derivation(&table, &delta)?;
        if !check.ok {
            continue;
        }
        // it must send the derived subalgebra into the center
        let derived = table.derived_subspace();
        let center = table.center();
        let targets_center = derived
            .basis_rows()
            .iter()
            .all(|v| center.contains_vector(&delta.apply(v)).unwrap_or(false));
        if !targets_center {
            continue;
        }
        let original = combined.compose(&delta).compose(&combined_inv);
        let check = is_derivation(a, &original)?;
        assert!(check.ok, "conjugated derivation stays a derivation");
        return Ok(Some(original));
    }
    Ok(None)
}

/// Evaluation {M x : M in space} of a subspace of the endomorphism space at
/// a point x.
pub fn evaluate_end_subspace_at(space: &Subspace, x: &[Scalar]) -> Subspace {
    let n = x.len();
    assert_eq!(space.ambient_dim(), n * n, "endomorphism space dimension");
    let field = space.field();
    let images: Vec<Vec<Scalar>> = space
        .basis_rows()
        .into_iter()
        .map(|flat| {
            let m = LinearMap::from_flat(n, field, &flat).expect("length n^2");
            m.apply(x)
        })
        .collect();
    Subspace::from_spanning(n, field, &images)
}

/// Commutator of two maps.
pub fn commutator(a: &LinearMap, b: &LinearMap) -> LinearMap {
    a.compose(b).sub(&b.compose(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_basis_vector;
    use crate::catalog;
    use crate::field::FieldSpec;
    use crate::matrix::{basis_vector, vec_scale};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    /// The outer derivation of the Witt-type table: e_2 -> e_{n-1},
    /// e_3 -> (n-2) e_n.
    fn witt_outer(n: usize) -> LinearMap {
        let mut d = LinearMap::zero(n, q());
        d.set_column(1, &basis_vector(n, n - 2, q()));
        d.set_column(
            2,
            &vec_scale(
                &Scalar::from_int(n as i64 - 2, q()),
                &basis_vector(n, n - 1, q()),
            ),
        );
        d
    }

    #[test]
    fn zero_map_is_a_derivation() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let check = is_derivation(&h1, &LinearMap::zero(3, q())).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn witt_outer_map_is_a_derivation() {
        for n in [5, 6, 8] {
            let w = catalog::witt(n, q()).unwrap();
            let check = is_derivation(&w, &witt_outer(n)).unwrap();
            assert!(check.ok, "outer map on witt({n})");
        }
    }

    #[test]
    fn identity_fails_on_heisenberg() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let check = is_derivation(&h1, &LinearMap::identity(3, q())).unwrap();
        assert!(!check.ok);
        let f = check.failure.unwrap();
        // first violating pair is (e_{-1}, e_1); residual is -e_0
        assert_eq!((f.i, f.j), (0, 2));
        assert_eq!(f.residual, vec_neg(&basis_vector(3, 1, q())));
    }

    #[test]
    fn chain_derivations_have_dimension_two_with_the_doubling_shape() {
        for n in 3..=6 {
            let a = catalog::chain(n, q()).unwrap();
            let ders = derivation_space(&a);
            assert_eq!(ders.dim(), 2, "chain({n})");
            // expected family: A(e_1)=e_1, A(e_i)=2^{i-1} e_i; B(e_1)=e_n
            let mut doubling = LinearMap::zero(n, q());
            for i in 0..n {
                let mut col = zero_vector(n, q());
                col[i] = Scalar::from_int(1i64 << i, q());
                doubling.set_column(i, &col);
            }
            let mut shear = LinearMap::zero(n, q());
            shear.set_column(0, &basis_vector(n, n - 1, q()));
            let family = Subspace::from_spanning(
                n * n,
                q(),
                &[doubling.flatten(), shear.flatten()],
            );
            assert_eq!(ders.subspace, family, "chain({n}) family");
        }
    }

    #[test]
    fn c6_derivations_have_dimension_five() {
        let c = catalog::commutative_c6(q()).unwrap();
        let ders = derivation_space(&c);
        assert_eq!(ders.dim(), 5);
        // diag(k
        // alpha) with weights 1..6 plus the four free corner entries
        let mut diag = LinearMap::zero(6, q());
        for i in 0..6 {
            let mut col = zero_vector(6, q());
            col[i] = Scalar::from_int(i as i64 + 1, q());
            diag.set_column(i, &col);
        }
        let mut expected = vec![diag.flatten()];
        for (r, c_idx) in [(4, 0), (4, 1), (5, 0), (5, 1)] {
            let mut m = LinearMap::zero(6, q());
            let mut col = zero_vector(6, q());
            col[r] = Scalar::one(q());
            m.set_column(c_idx, &col);
            expected.push(m.flatten());
        }
        let family = Subspace::from_spanning(36, q(), &expected);
        assert_eq!(ders.subspace, family);
    }

    #[test]
    fn inner_derivations() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let ad_center = inner_derivation(&h1, &algebra_basis_vector(&h1, 1)).unwrap();
        assert!(ad_center.is_zero());

        let w = catalog::witt(4, q()).unwrap();
        let ad_e1 = inner_derivation(&w, &algebra_basis_vector(&w, 0)).unwrap();
        assert_eq!(ad_e1.apply(&basis_vector(4, 1, q())), basis_vector(4, 2, q()));
        assert_eq!(
            ad_e1.apply(&basis_vector(4, 2, q())),
            vec_scale(&Scalar::from_int(2, q()), &basis_vector(4, 3, q()))
        );
        assert!(vec_is_zero(&ad_e1.apply(&basis_vector(4, 3, q()))));

        let chain = catalog::chain(4, q()).unwrap();
        assert!(inner_derivation(&chain, &basis_vector(4, 0, q())).is_err());
    }

    #[test]
    fn inner_derivations_lie_in_the_derivation_space() {
        let w = catalog::witt(5, q()).unwrap();
        let ders = derivation_space(&w);
        for i in 0..5 {
            let ad = inner_derivation(&w, &algebra_basis_vector(&w, i)).unwrap();
            assert!(ders.contains(&ad).unwrap());
        }
    }

    #[test]
    fn derivations_are_closed_under_commutator() {
        for a in [
            catalog::heisenberg(1, q()).unwrap(),
            catalog::witt(5, q()).unwrap(),
            catalog::chain(4, q()).unwrap(),
        ] {
            let ders = derivation_space(&a);
            for x in &ders.maps {
                for y in &ders.maps {
                    let c = commutator(x, y);
                    assert!(ders.contains(&c).unwrap());
                }
            }
        }
    }

    #[test]
    fn central_derivations() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let space = central_derivation_space(&h1);
        // maps e_{-1}, e_1 -> span{e_0}, e_0 -> 0: dimension 2
        assert_eq!(space.dim(), 2);

        let abelian = AlgebraTable::new("ab", 3, q(), Default::default()).unwrap();
        assert_eq!(central_derivation_space(&abelian).dim(), 9);

        let ders = derivation_space(&h1);
        assert!(ders.subspace.contains(&space).unwrap());
    }

    #[test]
    fn grading_derivation_values() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let d = grading_derivation(&h1, &Scalar::one(q())).unwrap();
        // original order (e_{-1}, e_0, e_1): weights (1, 2, 1)
        assert_eq!(d.apply(&basis_vector(3, 0, q())), basis_vector(3, 0, q()));
        assert_eq!(
            d.apply(&basis_vector(3, 1, q())),
            vec_scale(&Scalar::from_int(2, q()), &basis_vector(3, 1, q()))
        );
        assert!(grading_derivation(&h1, &Scalar::zero(q())).unwrap().is_zero());

        let f2 = FieldSpec::prime_field(2).unwrap();
        let h1f2 = catalog::heisenberg(1, f2).unwrap();
        let d = grading_derivation(&h1f2, &Scalar::one(f2)).unwrap();
        assert!(is_derivation(&h1f2, &d).unwrap().ok);
        assert!(vec_is_zero(&d.apply(&basis_vector(3, 1, f2))));

        let w = catalog::witt(4, q()).unwrap();
        assert!(grading_derivation(&w, &Scalar::one(q())).is_err());
    }

    #[test]
    fn center_targeting_space_examples() {
        let w5 = catalog::witt(5, q()).unwrap();
        let space = center_targeting_space(&w5);
        assert!(space.contains_vector(&witt_outer(5).flatten()).unwrap());

        let w4 = catalog::witt(4, q()).unwrap();
        let space4 = center_targeting_space(&w4);
        let ad_e1 = inner_derivation(&w4, &algebra_basis_vector(&w4, 0)).unwrap();
        assert!(space4.contains_vector(&ad_e1.flatten()).unwrap());

        // on a 2-step algebra the condition is vacuous
        let h1 = catalog::heisenberg(1, q()).unwrap();
        assert_eq!(center_targeting_space(&h1), derivation_space(&h1).subspace);
    }

    #[test]
    fn two_generated_matches_the_outer_construction() {
        for n in [5usize, 6, 7] {
            let w = catalog::witt(n, q()).unwrap();
            let d = two_generated_derivation(&w).unwrap().unwrap();
            assert_eq!(d, witt_outer(n), "witt({n})");
        }
        // witt(4): x = e_3 gives delta(e_2) = e_3, delta(e_3) = 2 e_4
        let w4 = catalog::witt(4, q()).unwrap();
        let d = two_generated_derivation(&w4).unwrap().unwrap();
        assert_eq!(d.apply(&basis_vector(4, 1, q())), basis_vector(4, 2, q()));
        assert_eq!(
            d.apply(&basis_vector(4, 2, q())),
            vec_scale(&Scalar::from_int(2, q()), &basis_vector(4, 3, q()))
        );

        let h2 = catalog::heisenberg(2, q()).unwrap();
        assert!(matches!(
            two_generated_derivation(&h2),
            Err(Error::WrongGeneratorCount { found: 4, .. })
        ));
    }

    #[test]
    fn derivation_space_of_z2_algebra_has_the_expected_shape() {
        let s = catalog::z2_algebra();
        let ders = derivation_space(&s);
        // grading map (identity on generators, zero on the derived part)
        // plus the 35-dimensional family of central derivations
        assert_eq!(ders.dim(), 36);
        for m in &ders.maps {
            for i in 7..12 {
                assert!(
                    vec_is_zero(&m.apply(&basis_vector(12, i, s.field()))),
                    "derivations vanish on the derived subalgebra"
                );
            }
        }
    }
}
