//! Property tests: field axioms on random scalars, canonical-form facts
//! about the elimination kernel, algebraic identities of the bracket, and
//! parser robustness.

mod common;

use proptest::prelude::*;

use nilpo_core::catalog;
use nilpo_core::deriv::{derivation_space, is_derivation};
use nilpo_core::matrix::{vec_add, vec_is_zero, vec_scale};
use nilpo_core::parse::parse_text;
use nilpo_core::subspace::Subspace;
use nilpo_core::{FieldSpec, Matrix, Scalar};

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn f7() -> FieldSpec {
    FieldSpec::prime_field(7).unwrap()
}

/// A scalar from a small fraction (denominator nonzero) or residue.
fn scalar_strategy(field: FieldSpec) -> impl Strategy<Value = Scalar> {
    match field {
        FieldSpec::Rationals => (-12i64..=12, 1i64..=7)
            .prop_map(move |(n, d)| Scalar::from_fraction(n, d, field).unwrap())
            .boxed(),
        FieldSpec::PrimeField(p) => (0..p)
            .prop_map(move |r| Scalar::from_int(r as i64, field))
            .boxed(),
    }
}

fn matrix_strategy(field: FieldSpec) -> impl Strategy<Value = Matrix> {
    (1usize..=5, 1usize..=6).prop_flat_map(move |(rows, cols)| {
        proptest::collection::vec(scalar_strategy(field), rows * cols).prop_map(move |entries| {
            Matrix::from_fn(rows, cols, field, |r, c| entries[r * cols + c].clone())
        })
    })
}

proptest! {
    #[test]
    fn rational_field_axioms(
        a in scalar_strategy(FieldSpec::Rationals),
        b in scalar_strategy(FieldSpec::Rationals),
        c in scalar_strategy(FieldSpec::Rationals),
    ) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
        // normalization: parse of the serialized form round-trips
        let text = a.serialized();
        prop_assert_eq!(Scalar::parse(&text, FieldSpec::Rationals).unwrap(), a);
    }

    #[test]
    fn prime_field_axioms(
        a in scalar_strategy(FieldSpec::prime_field(7).unwrap()),
        b in scalar_strategy(FieldSpec::prime_field(7).unwrap()),
        c in scalar_strategy(FieldSpec::prime_field(7).unwrap()),
    ) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn rref_is_idempotent_and_rank_agrees_with_the_naive_oracle(m in matrix_strategy(q())) {
        let red = m.rref();
        let again = red.matrix.rref();
        prop_assert_eq!(&red.matrix, &again.matrix);
        prop_assert_eq!(red.rank, again.rank);
        let naive = common::naive_rank(m.row_vectors(), m.field());
        prop_assert_eq!(red.rank, naive);
    }

    #[test]
    fn rref_idempotent_over_f7(m in matrix_strategy(FieldSpec::prime_field(7).unwrap())) {
        let red = m.rref();
        prop_assert_eq!(&red.matrix.rref().matrix, &red.matrix);
        let naive = common::naive_rank(m.row_vectors(), f7());
        prop_assert_eq!(red.rank, naive);
    }

    #[test]
    fn kernel_vectors_multiply_back_to_zero(m in matrix_strategy(q())) {
        let ker = Subspace::kernel_of(&m);
        prop_assert_eq!(ker.dim(), m.cols() - m.rank());
        for v in ker.basis_rows() {
            prop_assert!(vec_is_zero(&m.apply(&v)));
        }
    }

    #[test]
    fn solve_solutions_are_exact(
        m in matrix_strategy(q()),
        coeffs in proptest::collection::vec(-3i64..=3, 6),
    ) {
        // build a feasible right-hand side from a known solution
        let x: Vec<Scalar> = (0..m.cols())
            .map(|i| Scalar::from_int(coeffs[i % coeffs.len()], q()))
            .collect();
        let b = m.apply(&x);
        let solved = m.solve(&b).expect("feasible by construction");
        prop_assert_eq!(m.apply(&solved), b);
    }

    #[test]
    fn bracket_is_bilinear_and_anticommutative_on_witt(
        xs in proptest::collection::vec(-3i64..=3, 6),
        ys in proptest::collection::vec(-3i64..=3, 6),
        s in -3i64..=3,
    ) {
        let w = catalog::witt(6, q()).unwrap();
        let x: Vec<Scalar> = xs.iter().map(|&v| Scalar::from_int(v, q())).collect();
        let y: Vec<Scalar> = ys.iter().map(|&v| Scalar::from_int(v, q())).collect();
        let s = Scalar::from_int(s, q());
        let xy = w.bracket(&x, &y).unwrap();
        let yx = w.bracket(&y, &x).unwrap();
        prop_assert!(vec_is_zero(&vec_add(&xy, &yx)));
        // scaling slides through the first slot
        let sx = vec_scale(&s, &x);
        prop_assert_eq!(w.bracket(&sx, &y).unwrap(), vec_scale(&s, &xy));
        prop_assert!(vec_is_zero(&w.bracket(&x, &x).unwrap()));
    }

    #[test]
    fn random_inner_derivations_pass_the_leibniz_check(
        xs in proptest::collection::vec(-3i64..=3, 5),
    ) {
        let w = catalog::witt(5, q()).unwrap();
        let x: Vec<Scalar> = xs.iter().map(|&v| Scalar::from_int(v, q())).collect();
        let ad = nilpo_core::deriv::inner_derivation(&w, &x).unwrap();
        prop_assert!(is_derivation(&w, &ad).unwrap().ok);
    }

    #[test]
    fn membership_in_der_matches_the_leibniz_check(
        entries in proptest::collection::vec(-2i64..=2, 16),
    ) {
        let a = catalog::chain(4, q()).unwrap();
        let flat: Vec<Scalar> = entries.iter().map(|&v| Scalar::from_int(v, q())).collect();
        let m = nilpo_core::LinearMap::from_flat(4, q(), &flat).unwrap();
        let ders = derivation_space(&a);
        prop_assert_eq!(
            is_derivation(&a, &m).unwrap().ok,
            ders.contains(&m).unwrap()
        );
    }

    #[test]
    fn parser_never_panics_on_arbitrary_input(text in "\\PC*") {
        let _ = parse_text(&text);
    }

    #[test]
    fn parser_never_panics_on_structured_fragments(
        dim in 1usize..6,
        i in 1usize..9,
        j in 1usize..9,
        k in 1usize..9,
        c in -6i64..=6,
    ) {
        let src = format!("dim {dim}\nfield Q\n[e{i},e{j}] = {c}*e{k}\n");
        let _ = parse_text(&src);
    }
}
