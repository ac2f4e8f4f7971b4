//! Acceptance suite: one test per criterion, each printing its pass line and
//! asserting its time budget. All checks are exact.

mod common;

use std::time::{Duration, Instant};

use nilpo_core::algebra::{algebra_basis_vector, Nilindex};
use nilpo_core::autolocal::{
    self, exp_nilpotent, is_automorphism, restriction_pure_local_automorphism,
    two_step_pure_local_automorphism, verify_aut_certificate,
};
use nilpo_core::catalog;
use nilpo_core::deriv::{
    central_derivation_space, derivation_space, is_derivation, leibniz_system,
};
use nilpo_core::error::Error;
use nilpo_core::json::{algebra_from_json, algebra_to_json};
use nilpo_core::localder::{
    construct_pure_local_derivation, derivation_witness_at, find_center_targeting_derivation,
    local_derivation_upper_bound, restriction_pure_local_derivation,
    two_step_pure_local_derivation, verify_der_certificate, DerivationRoute, ProbeVerdict,
    SamplingPlan,
};
use nilpo_core::matrix::{basis_vector, vec_add, vec_is_zero, vec_scale, zero_vector};
use nilpo_core::parse::parse_text;
use nilpo_core::sample::{random_map, random_scalar, random_vector, rng_from_seed};
use nilpo_core::subspace::Subspace;
use nilpo_core::{AlgebraTable, FieldSpec, LinearMap, Scalar};

const SEED: u64 = 20240811;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn f(p: u64) -> FieldSpec {
    FieldSpec::prime_field(p).unwrap()
}

fn finish(criterion: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("criterion {criterion}: pass ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its budget: {elapsed:.2?} >= {budget:.2?}"
    );
}

fn full_plan(seed: u64) -> SamplingPlan {
    SamplingPlan {
        seed: Some(seed),
        random_points: 1000,
        exhaustive_cutoff: 1024,
    }
}

#[test]
fn criterion_1_derivation_space_reproduction() {
    let start = Instant::now();
    for n in 3..=8 {
        let block = Instant::now();
        let a = catalog::chain(n, q()).unwrap();
        let ders = derivation_space(&a);
        assert_eq!(ders.dim(), 2, "dim Der(chain({n}))");
        assert_eq!(
            ders.subspace,
            catalog::chain_derivation_family(n, q()),
            "chain({n}) family shape"
        );
        assert!(block.elapsed() < Duration::from_secs(5));
    }
    {
        let block = Instant::now();
        let c = catalog::commutative_c6(q()).unwrap();
        let ders = derivation_space(&c);
        assert_eq!(ders.dim(), 5, "dim Der(c6)");
        assert_eq!(ders.subspace, catalog::c6_derivation_family(q()));
        assert!(block.elapsed() < Duration::from_secs(5));
    }
    {
        let block = Instant::now();
        let s = catalog::z2_algebra();
        let ders = derivation_space(&s);
        assert_eq!(
            ders.subspace,
            catalog::z2_derivation_family(&s),
            "Der of the F2 algebra equals the grading-plus-central family"
        );
        // rank cross-check with the independent elimination routine
        let system = leibniz_system(&s);
        let naive = common::naive_rank(system.row_vectors(), s.field());
        assert_eq!(144 - naive, ders.dim(), "naive elimination agrees on rank");
        assert!(block.elapsed() < Duration::from_secs(5));
    }
    finish("1 (derivation spaces)", start, Duration::from_secs(40));
}

#[test]
fn criterion_2_locder_equals_der_replication() {
    let start = Instant::now();
    {
        let block = Instant::now();
        let s = catalog::z2_algebra();
        let ders = derivation_space(&s);
        let f2 = s.field();
        let mut gen_sum = zero_vector(12, f2);
        for i in 0..7 {
            gen_sum = vec_add(&gen_sum, &basis_vector(12, i, f2));
        }
        let report = local_derivation_upper_bound(&s, &ders, &[gen_sum]).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::LocDerEqualsDer, "F2 algebra");
        assert!(block.elapsed() < Duration::from_secs(5));
    }
    for n in 3..=8 {
        let block = Instant::now();
        let a = catalog::chain(n, q()).unwrap();
        let ders = derivation_space(&a);
        let mut probes = Vec::new();
        for i in 1..n - 1 {
            probes.push(vec_add(&basis_vector(n, 0, q()), &basis_vector(n, i, q())));
        }
        probes.push(vec_add(
            &basis_vector(n, n - 2, q()),
            &basis_vector(n, n - 1, q()),
        ));
        let report = local_derivation_upper_bound(&a, &ders, &probes).unwrap();
        assert_eq!(
            report.verdict,
            ProbeVerdict::LocDerEqualsDer,
            "chain({n})"
        );
        assert!(block.elapsed() < Duration::from_secs(5));
    }
    {
        let block = Instant::now();
        let c = catalog::commutative_c6(q()).unwrap();
        let ders = derivation_space(&c);
        let mut p1 = zero_vector(6, q());
        for i in 0..4 {
            p1 = vec_add(&p1, &basis_vector(6, i, q()));
        }
        let mut p2 = zero_vector(6, q());
        for i in 3..6 {
            p2 = vec_add(&p2, &basis_vector(6, i, q()));
        }
        let report = local_derivation_upper_bound(&c, &ders, &[p1, p2]).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::LocDerEqualsDer, "c6");
        assert!(block.elapsed() < Duration::from_secs(5));
    }
    finish("2 (LocDer = Der probes)", start, Duration::from_secs(40));
}

#[test]
fn criterion_3_two_step_pure_local_derivations() {
    let start = Instant::now();
    for n in 1..=3 {
        for field in [q(), f(5)] {
            let h = catalog::heisenberg(n, field).unwrap();
            let cert = two_step_pure_local_derivation(&h, &full_plan(SEED)).unwrap();
            assert!(
                !vec_is_zero(&cert.failure.residual),
                "h_{n} over {field}: nonzero residual"
            );
            verify_der_certificate(&h, &cert).unwrap();
            if field == f(5) && n == 1 {
                assert!(cert.exhaustive, "h_1 over F5 enumerates all 125 points");
                assert_eq!(cert.extra_points_checked, 125);
            } else {
                assert_eq!(cert.extra_points_checked, 1000);
            }
        }
    }
    let h1f2 = catalog::heisenberg(1, f(2)).unwrap();
    assert!(matches!(
        two_step_pure_local_derivation(&h1f2, &full_plan(SEED)),
        Err(Error::DegenerateInChar2)
    ));
    finish("3 (2-step certificates)", start, Duration::from_secs(30));
}

#[test]
fn criterion_4_nilindex_four_and_up_pipeline() {
    let start = Instant::now();
    for n in 4..=8 {
        let w = catalog::witt(n, q()).unwrap();
        let (d, route) = find_center_targeting_derivation(&w).unwrap().unwrap();
        if n == 4 {
            assert_eq!(route, DerivationRoute::AdjointNilindexFour);
        } else {
            assert_eq!(route, DerivationRoute::TwoGenerated, "witt({n})");
            assert_eq!(
                d.apply(&basis_vector(n, 1, q())),
                basis_vector(n, n - 2, q()),
                "d(e_2) = e_(n-1)"
            );
            assert_eq!(
                d.apply(&basis_vector(n, 2, q())),
                vec_scale(
                    &Scalar::from_int(n as i64 - 2, q()),
                    &basis_vector(n, n - 1, q())
                ),
                "d(e_3) = (n-2) e_n"
            );
        }
        let cert = restriction_pure_local_derivation(&w, &d, &full_plan(SEED)).unwrap();
        assert!(!vec_is_zero(&cert.failure.residual));
        assert_eq!(cert.extra_points_checked, 1000);
        verify_der_certificate(&w, &cert).unwrap();
    }
    finish("4 (nilindex >= 4 pipeline)", start, Duration::from_secs(60));
}

#[test]
fn criterion_5_automorphism_side() {
    let start = Instant::now();

    // 200 seeded square-zero derivations across catalog algebras
    let mut algebras: Vec<AlgebraTable> = vec![
        catalog::heisenberg(1, q()).unwrap(),
        catalog::heisenberg(2, q()).unwrap(),
        catalog::heisenberg(3, q()).unwrap(),
    ];
    for n in 4..=8 {
        algebras.push(catalog::witt(n, q()).unwrap());
    }
    let mut rng = rng_from_seed(SEED);
    let mut exp_count = 0;
    for a in &algebras {
        let space = central_derivation_space(a);
        let n = a.dim();
        for _ in 0..25 {
            let mut d = LinearMap::zero(n, q());
            for flat in space.basis_rows() {
                let c = random_scalar(&mut rng, q());
                if !c.is_zero() {
                    let basis_map = LinearMap::from_flat(n, q(), &flat).unwrap();
                    d = d.add(&basis_map.scale(&c));
                }
            }
            assert!(d.compose(&d).is_zero(), "sampled derivation squares to zero");
            let e = exp_nilpotent(a, &d).unwrap();
            assert!(is_automorphism(a, e.map()).unwrap().ok);
            exp_count += 1;
        }
    }
    assert_eq!(exp_count, 200);

    // 2-step certificates with eps = 2
    for n in 1..=3 {
        let h = catalog::heisenberg(n, q()).unwrap();
        let eps = Scalar::from_int(2, q());
        let cert = two_step_pure_local_automorphism(&h, &eps, &full_plan(SEED)).unwrap();
        assert!(!vec_is_zero(&cert.failure.residual));
        verify_aut_certificate(&h, &cert).unwrap();
    }

    // restriction certificates on the witt family
    for n in 4..=8 {
        let w = catalog::witt(n, q()).unwrap();
        let (d, _) = find_center_targeting_derivation(&w).unwrap().unwrap();
        let cert = restriction_pure_local_automorphism(&w, &d, &full_plan(SEED)).unwrap();
        assert!(!vec_is_zero(&cert.failure.residual));
        verify_aut_certificate(&w, &cert).unwrap();
    }

    // no suitable scaling parameter over F3
    let h1f3 = catalog::heisenberg(1, f(3)).unwrap();
    assert!(matches!(
        two_step_pure_local_automorphism(&h1f3, &Scalar::from_int(2, f(3)), &full_plan(SEED)),
        Err(Error::NoSuitableScalar { .. })
    ));

    finish("5 (automorphism side)", start, Duration::from_secs(60));
}

#[test]
fn criterion_6_oracle_equivalence() {
    let start = Instant::now();
    let mut algebras: Vec<AlgebraTable> = vec![
        catalog::heisenberg(1, q()).unwrap(),
        catalog::heisenberg(2, q()).unwrap(),
        catalog::commutative_c6(q()).unwrap(),
    ];
    for n in 3..=6 {
        algebras.push(catalog::witt(n, q()).unwrap());
        algebras.push(catalog::chain(n, q()).unwrap());
    }
    for a in &algebras {
        assert!(a.dim() <= 6);
        let n = a.dim();
        let ders = derivation_space(a);
        let mut rng = rng_from_seed(SEED ^ n as u64);
        for _ in 0..100 {
            let m = random_map(&mut rng, n, q());
            let direct = is_derivation(a, &m).unwrap().ok;
            let member = ders.contains(&m).unwrap();
            assert_eq!(direct, member, "{}: membership oracle", a.name());
        }
        for _ in 0..100 {
            let mut d = LinearMap::zero(n, q());
            for map in &ders.maps {
                let c = random_scalar(&mut rng, q());
                if !c.is_zero() {
                    d = d.add(&map.scale(&c));
                }
            }
            assert!(is_derivation(a, &d).unwrap().ok);
            let x = random_vector(&mut rng, n, q());
            let witness = derivation_witness_at(a, &ders, &d, &x).unwrap();
            assert!(witness.is_some(), "{}: derivations are local", a.name());
        }
    }
    finish("6 (oracle equivalence)", start, Duration::from_secs(30));
}

#[test]
fn criterion_7_structural_claims() {
    let start = Instant::now();
    for n in 3..=10 {
        let w = catalog::witt(n, q()).unwrap();
        let report = w.lower_central_series();
        assert_eq!(report.nilindex, Nilindex::Finite(n), "witt({n}) nilindex");
        for k in 2..n {
            let expected = Subspace::from_spanning(
                n,
                q(),
                &(k..n).map(|i| basis_vector(n, i, q())).collect::<Vec<_>>(),
            );
            assert_eq!(report.layers[k - 1], expected, "witt({n}) layer {k}");
        }
        let z = Subspace::from_spanning(n, q(), &[basis_vector(n, n - 1, q())]);
        assert_eq!(report.center, z, "witt({n}) center");
        if n >= 4 {
            let deep = &report.layers[n - 4]; // the (n-3)-rd layer
            let derived = &report.layers[1];
            let product = w.product_subspace(deep, derived).unwrap();
            if n >= 5 {
                assert!(product.is_zero(), "witt({n}) obstruction");
            } else {
                assert!(!product.is_zero(), "witt(4) inner route stays open");
            }
        }
    }
    finish("7 (structural claims)", start, Duration::from_secs(5));
}

#[test]
fn criterion_8_round_trip_and_fuzz() {
    let start = Instant::now();
    let tables = [
        catalog::heisenberg(1, q()).unwrap(),
        catalog::heisenberg(3, q()).unwrap(),
        catalog::witt(5, q()).unwrap(),
        catalog::witt(8, q()).unwrap(),
        catalog::chain(4, q()).unwrap(),
        catalog::commutative_c6(q()).unwrap(),
        catalog::z2_algebra(),
    ];
    for table in &tables {
        let text = algebra_to_json(table);
        let parsed = algebra_from_json(&text).unwrap();
        assert_eq!(&parsed, table, "round trip of {}", table.name());
        assert_eq!(algebra_to_json(&parsed), text, "byte-stable output");
    }

    // 10^4 random byte inputs: diagnostics, never panics
    use rand::Rng;
    let mut rng = rng_from_seed(SEED);
    let mut parsed_ok = 0usize;
    for _ in 0..10_000 {
        let len = rng.gen_range(0..200);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let text = String::from_utf8_lossy(&bytes);
        if parse_text(&text).is_ok() {
            parsed_ok += 1;
        }
    }
    // random bytes essentially never form a valid document
    assert!(parsed_ok <= 1, "{parsed_ok} junk inputs parsed");
    finish("8 (round trip and fuzz)", start, Duration::from_secs(60));
}

#[test]
fn criterion_3_and_5_checked_via_serialization_round_trip() {
    // certificates survive JSON round trips and re-verification
    let h2 = catalog::heisenberg(2, q()).unwrap();
    let plan = SamplingPlan {
        seed: Some(SEED),
        random_points: 50,
        exhaustive_cutoff: 0,
    };
    let (cert, _) = construct_pure_local_derivation(&h2, &plan).unwrap();
    let text = nilpo_core::json::der_certificate_to_json(&cert);
    let parsed = nilpo_core::json::der_certificate_from_json(&text).unwrap();
    verify_der_certificate(&h2, &parsed).unwrap();

    let eps = Scalar::from_int(2, q());
    let (acert, _) = autolocal::construct_pure_local_automorphism(&h2, &eps, &plan).unwrap();
    let atext = nilpo_core::json::aut_certificate_to_json(&acert);
    let aparsed = nilpo_core::json::aut_certificate_from_json(&atext).unwrap();
    verify_aut_certificate(&h2, &aparsed).unwrap();
}

#[test]
fn catalog_verification_replays_green() {
    // the regression backbone: every scripted fact passes on a clean build
    let cases: Vec<(&str, catalog::CatalogParams)> = vec![
        (
            "heisenberg",
            catalog::CatalogParams {
                n: Some(2),
                field: None,
            },
        ),
        (
            "witt",
            catalog::CatalogParams {
                n: Some(6),
                field: None,
            },
        ),
        (
            "chain",
            catalog::CatalogParams {
                n: Some(5),
                field: None,
            },
        ),
        ("c6", catalog::CatalogParams::default()),
        ("s_z2", catalog::CatalogParams::default()),
    ];
    for (name, params) in cases {
        let report = catalog::verify_example(name, &params, SEED).unwrap();
        for fact in &report.facts {
            assert!(
                fact.passed,
                "{name}: fact {} failed: {}",
                fact.label, fact.detail
            );
        }
    }
}

#[test]
fn witness_system_on_heisenberg_is_feasible_at_the_mixed_point() {
    // the mixed generator-plus-center point used by the case split
    let h1 = catalog::heisenberg(1, q()).unwrap();
    let ders = derivation_space(&h1);
    let cert = two_step_pure_local_derivation(
        &h1,
        &SamplingPlan {
            seed: Some(SEED),
            random_points: 0,
            exhaustive_cutoff: 0,
        },
    )
    .unwrap();
    let x = vec_add(
        &algebra_basis_vector(&h1, 0),
        &algebra_basis_vector(&h1, 1),
    );
    let witness = derivation_witness_at(&h1, &ders, &cert.map, &x)
        .unwrap()
        .expect("feasible by the case split");
    assert_eq!(witness.apply(&x), cert.map.apply(&x));
}
