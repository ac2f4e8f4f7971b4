//! Automorphism checking, exact exponentials of nilpotent derivations, the
//! scaling automorphism on 2-step tables, and the constructions of local
//! automorphisms that are not automorphisms.
//!
//! The classical construction scales the derived subalgebra by the square of
//! a transcendental constant; no exact field here contains one, so the
//! constructions are parametrized by a field element eps with eps^2 outside
//! {0, 1}. Both case-split proofs go through verbatim with eps^2 - 1 in
//! place of the transcendental factor, and every produced automorphism is
//! re-verified before it lands in a certificate.

use crate::algebra::{restrict_map, AdaptedBasis, AlgebraTable};
use crate::deriv::{is_derivation, DerivationBasis};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linmap::LinearMap;
use crate::localder::{LocalWitness, PairFailure, SamplingPlan, WitnessTag};
use crate::matrix::{format_vector, vec_is_zero, vec_scale, vec_sub, zero_vector};
use crate::sample::{enumerate_vectors, exhaustive_count, random_vector, rng_from_seed};

/// Outcome of a multiplicativity check.
#[derive(Debug, Clone)]
pub struct AutCheck {
    pub ok: bool,
    pub invertible: bool,
    /// First basis pair where f([e_i, e_j]) differs from [f e_i, f e_j].
    pub failure: Option<MultFailureAt>,
}

#[derive(Debug, Clone)]
pub struct MultFailureAt {
    pub i: usize,
    pub j: usize,
    pub residual: Vec<Scalar>,
}

/// f(xy) - (f x)(f y) for arbitrary vectors.
pub fn mult_residual(
    a: &AlgebraTable,
    f: &LinearMap,
    x: &[Scalar],
    y: &[Scalar],
) -> Result<Vec<Scalar>> {
    let lhs = f.apply(&a.bracket(x, y)?);
    let rhs = a.bracket(&f.apply(x), &f.apply(y))?;
    Ok(vec_sub(&lhs, &rhs))
}

/// Invertibility plus multiplicativity on all basis pairs.
pub fn is_automorphism(a: &AlgebraTable, f: &LinearMap) -> Result<AutCheck> {
    if f.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "map dimension",
            expected: a.dim(),
            found: f.dim(),
        });
    }
    if f.field() != a.field() {
        return Err(Error::FieldMismatch {
            left: a.field(),
            right: f.field(),
        });
    }
    if f.inverse().is_none() {
        return Ok(AutCheck {
            ok: false,
            invertible: false,
            failure: None,
        });
    }
    let n = a.dim();
    for i in 0..n {
        let fi = f.column(i);
        for j in 0..n {
            let fj = f.column(j);
            let lhs = f.apply(&a.bracket_basis(i, j));
            let rhs = a.bracket(&fi, &fj)?;
            let residual = vec_sub(&lhs, &rhs);
            if !vec_is_zero(&residual) {
                return Ok(AutCheck {
                    ok: false,
                    invertible: true,
                    failure: Some(MultFailureAt { i, j, residual }),
                });
            }
        }
    }
    Ok(AutCheck {
        ok: true,
        invertible: true,
        failure: None,
    })
}

/// A verified automorphism with its cached inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutMap {
    map: LinearMap,
    inverse: LinearMap,
}

impl AutMap {
    /// Verifies multiplicativity and invertibility before wrapping.
    pub fn verified(a: &AlgebraTable, map: LinearMap) -> Result<AutMap> {
        let check = is_automorphism(a, &map)?;
        if !check.ok {
            return Err(Error::Verification {
                context: "map failed the automorphism check".into(),
            });
        }
        let inverse = map.inverse().expect("checked invertible");
        Ok(AutMap { map, inverse })
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn inverse(&self) -> &LinearMap {
        &self.inverse
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.map.apply(v)
    }

    /// self after other, re-verified.
    pub fn compose(&self, a: &AlgebraTable, other: &AutMap) -> Result<AutMap> {
        AutMap::verified(a, self.map.compose(&other.map))
    }
}

/// Finite exponential sum of a nilpotent derivation. Over GF(p) the
/// nilpotency index q must satisfy q - 1 < p so that every needed factorial
/// is invertible.
pub fn exp_nilpotent(a: &AlgebraTable, d: &LinearMap) -> Result<AutMap> {
    let check = is_derivation(a, d)?;
    if !check.ok {
        return Err(Error::NotADerivation {
            context: "exponential input".into(),
        });
    }
    let q = d.nilpotency_index().ok_or(Error::NotNilpotentMap)?;
    let ch = a.field().characteristic();
    if ch > 0 && q as u64 > ch {
        return Err(Error::FactorialNotInvertible { k: ch, modulus: ch });
    }
    let n = a.dim();
    let field = a.field();
    let mut sum = LinearMap::identity(n, field);
    let mut term = LinearMap::identity(n, field);
    for k in 1..q {
        let inv_k = Scalar::from_int(k as i64, field)
            .inverse()
            .expect("k < characteristic");
        term = term.compose(d).scale(&inv_k);
        sum = sum.add(&term);
    }
    AutMap::verified(a, sum)
}

fn check_epsilon_field(a: &AlgebraTable, eps: &Scalar) -> Result<()> {
    if eps.field() != a.field() {
        return Err(Error::FieldMismatch {
            left: a.field(),
            right: eps.field(),
        });
    }
    Ok(())
}

/// Whether the field has any element whose square avoids {0, 1}.
pub fn field_admits_scaling(field: FieldSpec) -> bool {
    match field {
        FieldSpec::Rationals => true,
        FieldSpec::PrimeField(p) => p >= 5,
    }
}

/// The automorphism scaling a generating complement by eps and the derived
/// subalgebra by eps^2 on a 2-step table.
pub fn scaling_automorphism(a: &AlgebraTable, eps: &Scalar) -> Result<AutMap> {
    check_epsilon_field(a, eps)?;
    if eps.is_zero() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "the scaling parameter must be nonzero".into(),
        });
    }
    let (_, adapted) = crate::deriv::two_step_adapted(a)?;
    let psi = scaling_map(a, &adapted, eps);
    AutMap::verified(a, psi)
}

fn scaling_map(a: &AlgebraTable, adapted: &AdaptedBasis, eps: &Scalar) -> LinearMap {
    let n = a.dim();
    let field = a.field();
    let m = adapted.generator_count();
    let eps2 = eps * eps;
    let mut psi = LinearMap::zero(n, field);
    for q in 0..n {
        let weight = if q < m { eps.clone() } else { eps2.clone() };
        let mut col = zero_vector(n, field);
        col[q] = weight;
        psi.set_column(q, &col);
    }
    adapted.to_original_map(&psi)
}

#[derive(Debug, Clone)]
pub struct PureLocalAutCertificate {
    pub algebra: String,
    pub dim: usize,
    pub field: FieldSpec,
    /// The local automorphism that is not an automorphism.
    pub map: LinearMap,
    pub failure: PairFailure,
    pub strategy: String,
    pub epsilon: Option<Scalar>,
    pub witnesses: Vec<LocalWitness>,
    pub extra_points_checked: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

enum AutEngineKind<'a> {
    TwoStep { eps: &'a Scalar },
    Restriction { exp_d: AutMap },
}

/// Case-split witness formulas for a constructed candidate.
struct AutWitnessEngine<'a> {
    algebra: &'a AlgebraTable,
    adapted: &'a AdaptedBasis,
    nabla: &'a LinearMap,
    kind: AutEngineKind<'a>,
}

impl AutWitnessEngine<'_> {
    /// Generator case: the identity plus a rank-one square-zero derivation
    /// moving the pivot generator by the candidate's correction at x. Deep
    /// case: the scaling automorphism (2-step) or the exponential of the
    /// producing derivation (restriction). Falls back to a solved witness
    /// when the pivot would feed the correction back into itself.
    fn witness_for(&self, x: &[Scalar]) -> Result<Option<LocalWitness>> {
        let n = self.algebra.dim();
        let field = self.algebra.field();
        let m = self.adapted.generator_count();
        let coords = self.adapted.to_adapted_vec(x);
        let target = self.nabla.apply(x);
        // correction in adapted coordinates: nabla(x) - x
        let correction = vec_sub(&self.adapted.to_adapted_vec(&target), &coords);
        let has_generator = (0..m).any(|j| !coords[j].is_zero());

        let candidate: Option<(LinearMap, WitnessTag)> = if has_generator {
            // a pivot whose own coordinate in the correction vanishes keeps
            // the rank-one map square-zero
            let pivot = (0..m).find(|&j| !coords[j].is_zero() && correction[j].is_zero());
            pivot.map(|j| {
                let inv = coords[j].inverse().expect("pivot coordinate is nonzero");
                let mut dmap = LinearMap::zero(n, field);
                dmap.set_column(j, &vec_scale(&inv, &correction));
                let phi = LinearMap::identity(n, field).add(&dmap);
                (
                    self.adapted.to_original_map(&phi),
                    WitnessTag::GeneratorCase,
                )
            })
        } else {
            match &self.kind {
                AutEngineKind::TwoStep { eps } => Some((
                    scaling_map(self.algebra, self.adapted, eps),
                    WitnessTag::DeepCase,
                )),
                AutEngineKind::Restriction { exp_d, .. } => {
                    Some((exp_d.map().clone(), WitnessTag::DeepCase))
                }
            }
        };

        if let Some((phi, tag)) = candidate {
            if phi.apply(x) == target {
                if let Ok(aut) = AutMap::verified(self.algebra, phi) {
                    return Ok(Some(LocalWitness {
                        point: x.to_vec(),
                        map: aut.map().clone(),
                        tag,
                    }));
                }
            }
        }
        self.solved_witness(x, &target)
    }

    /// Linear feasibility over Der for a nilpotent derivation N with
    /// N(x) = nabla(x) - x, exponentiated and re-checked at x.
    fn solved_witness(&self, x: &[Scalar], target: &[Scalar]) -> Result<Option<LocalWitness>> {
        let ders = crate::deriv::derivation_space(self.algebra);
        exp_solve_witness(self.algebra, &ders, self.nabla, x, target)
    }
}

fn exp_solve_witness(
    a: &AlgebraTable,
    ders: &DerivationBasis,
    _nabla: &LinearMap,
    x: &[Scalar],
    target: &[Scalar],
) -> Result<Option<LocalWitness>> {
    let n = a.dim();
    let field = a.field();
    let needed = vec_sub(target, x);
    if vec_is_zero(&needed) {
        return Ok(Some(LocalWitness {
            point: x.to_vec(),
            map: LinearMap::identity(n, field),
            tag: WitnessTag::LinearSolve,
        }));
    }
    if ders.maps.is_empty() {
        return Ok(None);
    }
    let system = crate::matrix::Matrix::from_fn(n, ders.maps.len(), field, |r, c| {
        ders.maps[c].apply(x)[r].clone()
    });
    let Some(coeffs) = system.solve(&needed) else {
        return Ok(None);
    };
    let mut nmap = LinearMap::zero(n, field);
    for (c, d) in coeffs.iter().zip(&ders.maps) {
        if !c.is_zero() {
            nmap = nmap.add(&d.scale(c));
        }
    }
    if nmap.nilpotency_index().is_none() {
        return Ok(None);
    }
    let Ok(phi) = exp_nilpotent(a, &nmap) else {
        return Ok(None);
    };
    if phi.apply(x) != target {
        return Ok(None);
    }
    Ok(Some(LocalWitness {
        point: x.to_vec(),
        map: phi.map().clone(),
        tag: WitnessTag::LinearSolve,
    }))
}

fn certify_aut(
    a: &AlgebraTable,
    engine: &AutWitnessEngine<'_>,
    failure: PairFailure,
    strategy: String,
    epsilon: Option<Scalar>,
    plan: &SamplingPlan,
) -> Result<PureLocalAutCertificate> {
    assert!(
        !vec_is_zero(&failure.residual),
        "certificate failure residual must be nonzero"
    );
    let recomputed = mult_residual(a, engine.nabla, &failure.left, &failure.right)?;
    assert_eq!(recomputed, failure.residual, "stored residual recomputes");
    let check = is_automorphism(a, engine.nabla)?;
    assert!(!check.ok, "the candidate must fail the automorphism check");

    let mut witnesses = Vec::new();
    for x in crate::localder::default_probes(a) {
        let w = engine.witness_for(&x)?.ok_or(Error::WitnessUnavailable {
            point: format_vector(&x),
        })?;
        witnesses.push(w);
    }
    let (points, exhaustive) = sampled_points_aut(a, plan)?;
    let extra_points_checked = points.len();
    for x in &points {
        engine.witness_for(x)?.ok_or(Error::WitnessUnavailable {
            point: format_vector(x),
        })?;
    }
    Ok(PureLocalAutCertificate {
        algebra: a.name().to_string(),
        dim: a.dim(),
        field: a.field(),
        map: engine.nabla.clone(),
        failure,
        strategy,
        epsilon,
        witnesses,
        extra_points_checked,
        exhaustive,
        seed: plan.seed,
    })
}

fn sampled_points_aut(a: &AlgebraTable, plan: &SamplingPlan) -> Result<(Vec<Vec<Scalar>>, bool)> {
    let n = a.dim();
    let field = a.field();
    if exhaustive_count(field, n, plan.exhaustive_cutoff).is_some() {
        return Ok((enumerate_vectors(field, n).collect(), true));
    }
    if plan.random_points == 0 {
        return Ok((Vec::new(), false));
    }
    let seed = plan.seed.ok_or(Error::SeedRequired)?;
    let mut rng = rng_from_seed(seed);
    let points = (0..plan.random_points)
        .map(|_| random_vector(&mut rng, n, field))
        .collect();
    Ok((points, false))
}

fn first_generator_pair(
    a: &AlgebraTable,
    adapted: &AdaptedBasis,
    accept: &mut dyn FnMut(&[Scalar]) -> bool,
) -> Option<(Vec<Scalar>, Vec<Scalar>, Vec<Scalar>)> {
    let m = adapted.generator_count();
    for i in 0..m {
        let gi = adapted.basis_vector_original(i);
        for j in 0..m {
            if i == j {
                continue;
            }
            let gj = adapted.basis_vector_original(j);
            let w = a.bracket(&gi, &gj).expect("generators have full length");
            if !vec_is_zero(&w) && accept(&w) {
                return Some((gi, gj, w));
            }
        }
    }
    None
}

/// 2-step construction: identity on a generating complement, eps^2 on the
/// derived subalgebra.
pub fn two_step_pure_local_automorphism(
    a: &AlgebraTable,
    eps: &Scalar,
    plan: &SamplingPlan,
) -> Result<PureLocalAutCertificate> {
    check_epsilon_field(a, eps)?;
    if !field_admits_scaling(a.field()) {
        return Err(Error::NoSuitableScalar { field: a.field() });
    }
    let eps2 = eps * eps;
    if eps2.is_zero() || eps2.is_one() {
        return Err(Error::UnsuitableEpsilon {
            eps: eps.serialized(),
        });
    }
    let (_, adapted) = crate::deriv::two_step_adapted(a)?;
    let n = a.dim();
    let field = a.field();
    let m = adapted.generator_count();

    let mut nabla_adapted = LinearMap::identity(n, field);
    for q in m..n {
        let mut col = zero_vector(n, field);
        col[q] = eps2.clone();
        nabla_adapted.set_column(q, &col);
    }
    let nabla = adapted.to_original_map(&nabla_adapted);

    let (left, right, _) = first_generator_pair(a, &adapted, &mut |_| true)
        .expect("a 2-step table has a nonzero bracket of generators");
    let residual = mult_residual(a, &nabla, &left, &right)?;
    let failure = PairFailure {
        left,
        right,
        residual,
    };
    let strategy = format!(
        "identity on the {m} generator positions, scaling by {} on the derived \
         subalgebra; generator case: identity plus a rank-one square-zero \
         derivation; deep case: the two-weight scaling automorphism",
        eps2.serialized()
    );
    let engine = AutWitnessEngine {
        algebra: a,
        adapted: &adapted,
        nabla: &nabla,
        kind: AutEngineKind::TwoStep { eps },
    };
    certify_aut(a, &engine, failure, strategy, Some(eps.clone()), plan)
}

/// Restriction construction: identity off the derived-subalgebra positions,
/// identity plus the supplied derivation on them.
pub fn restriction_pure_local_automorphism(
    a: &AlgebraTable,
    d: &LinearMap,
    plan: &SamplingPlan,
) -> Result<PureLocalAutCertificate> {
    let check = is_derivation(a, d)?;
    if !check.ok {
        return Err(Error::NotADerivation {
            context: "restriction construction input".into(),
        });
    }
    if d.is_zero() {
        return Err(Error::TrivialDerivation);
    }
    let series = a.lower_central_series();
    let p = match series.nilindex {
        crate::algebra::Nilindex::Finite(p) => p,
        crate::algebra::Nilindex::NotNilpotent => return Err(Error::NotNilpotent),
    };
    if p < 4 {
        return Err(Error::WrongNilindex {
            expected: ">= 4".into(),
            found: p.to_string(),
        });
    }
    let derived = &series.layers[1];
    let center = &series.center;
    for w in derived.basis_rows() {
        if !center.contains_vector(&d.apply(&w))? {
            return Err(Error::RestrictionPrecondition {
                reason: "derivation does not send the derived subalgebra into the center".into(),
            });
        }
    }
    let exp_d = exp_nilpotent(a, d)?;
    let (_, adapted) = a.adapted_basis()?;
    let n = a.dim();
    let m = adapted.generator_count();
    let third = &series.layers[2];

    let preferred = first_generator_pair(a, &adapted, &mut |w| {
        !third.contains_vector(w).unwrap_or(true) && !vec_is_zero(&d.apply(w))
    });
    let fallback = first_generator_pair(a, &adapted, &mut |w| !vec_is_zero(&d.apply(w)));
    let (left, right, _) = preferred
        .or(fallback)
        .ok_or(Error::RestrictionPrecondition {
            reason: "derivation vanishes on every bracket of adapted generators".into(),
        })?;

    let deep_positions: Vec<usize> = (m..n).collect();
    let correction_adapted = restrict_map(&adapted.to_adapted_map(d), &deep_positions);
    let nabla =
        LinearMap::identity(n, a.field()).add(&adapted.to_original_map(&correction_adapted));

    let residual = mult_residual(a, &nabla, &left, &right)?;
    let failure = PairFailure {
        left,
        right,
        residual,
    };
    let strategy = format!(
        "identity plus the supplied derivation restricted to the {} \
         derived-subalgebra positions; generator case: identity plus a \
         rank-one square-zero derivation; deep case: the exponential of the \
         supplied derivation",
        n - m
    );
    let engine = AutWitnessEngine {
        algebra: a,
        adapted: &adapted,
        nabla: &nabla,
        kind: AutEngineKind::Restriction { exp_d },
    };
    certify_aut(a, &engine, failure, strategy, None, plan)
}

/// Witness families for a pointwise automorphism search.
pub enum AutWitnessFamily<'a> {
    /// Case formulas for the 2-step candidate with the given parameter.
    TwoStepCases { eps: &'a Scalar },
    /// Case formulas for the restriction candidate of the given derivation.
    RestrictionCases { d: &'a LinearMap },
    /// Solve for a nilpotent derivation N with N(x) = candidate(x) - x and
    /// exponentiate it.
    ExpDerivationSolve { ders: &'a DerivationBasis },
}

/// Finds an automorphism agreeing with the candidate at one point, or `None`.
pub fn automorphism_witness_at(
    a: &AlgebraTable,
    nabla: &LinearMap,
    x: &[Scalar],
    family: AutWitnessFamily<'_>,
) -> Result<Option<AutMap>> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "point length",
            expected: a.dim(),
            found: x.len(),
        });
    }
    let witness = match family {
        AutWitnessFamily::TwoStepCases { eps } => {
            let (_, adapted) = crate::deriv::two_step_adapted(a)?;
            let engine = AutWitnessEngine {
                algebra: a,
                adapted: &adapted,
                nabla,
                kind: AutEngineKind::TwoStep { eps },
            };
            engine.witness_for(x)?
        }
        AutWitnessFamily::RestrictionCases { d } => {
            let exp_d = exp_nilpotent(a, d)?;
            let (_, adapted) = a.adapted_basis()?;
            let engine = AutWitnessEngine {
                algebra: a,
                adapted: &adapted,
                nabla,
                kind: AutEngineKind::Restriction { exp_d },
            };
            engine.witness_for(x)?
        }
        AutWitnessFamily::ExpDerivationSolve { ders } => {
            let target = nabla.apply(x);
            exp_solve_witness(a, ders, nabla, x, &target)?
        }
    };
    witness.map(|w| AutMap::verified(a, w.map)).transpose()
}

/// Re-verifies a certificate from scratch.
pub fn verify_aut_certificate(a: &AlgebraTable, cert: &PureLocalAutCertificate) -> Result<()> {
    let fail = |context: &str| Error::Verification {
        context: context.into(),
    };
    if cert.dim != a.dim() || cert.field != a.field() {
        return Err(fail("certificate does not match the algebra"));
    }
    let check = is_automorphism(a, &cert.map)?;
    if check.ok {
        return Err(fail("certificate map is an automorphism"));
    }
    let residual = mult_residual(a, &cert.map, &cert.failure.left, &cert.failure.right)?;
    if vec_is_zero(&residual) || residual != cert.failure.residual {
        return Err(fail("stored failure residual does not recompute"));
    }
    for w in &cert.witnesses {
        let check = is_automorphism(a, &w.map)?;
        if !check.ok {
            return Err(fail("stored witness is not an automorphism"));
        }
        if w.map.apply(&w.point) != cert.map.apply(&w.point) {
            return Err(fail("stored witness does not match the map at its point"));
        }
    }
    Ok(())
}

/// Routes by nilindex and produces the matching certificate.
pub fn construct_pure_local_automorphism(
    a: &AlgebraTable,
    eps: &Scalar,
    plan: &SamplingPlan,
) -> Result<(
    PureLocalAutCertificate,
    Option<crate::localder::DerivationRoute>,
)> {
    let series = a.lower_central_series();
    match series.nilindex {
        crate::algebra::Nilindex::NotNilpotent => Err(Error::NotNilpotent),
        crate::algebra::Nilindex::Finite(p) if p <= 2 => Err(Error::WrongNilindex {
            expected: ">= 3".into(),
            found: p.to_string(),
        }),
        crate::algebra::Nilindex::Finite(3) => {
            Ok((two_step_pure_local_automorphism(a, eps, plan)?, None))
        }
        crate::algebra::Nilindex::Finite(_) => {
            let Some((d, route)) = crate::localder::find_center_targeting_derivation(a)? else {
                return Err(Error::RestrictionPrecondition {
                    reason: "no center-targeting derivation found by any route".into(),
                });
            };
            let cert = restriction_pure_local_automorphism(a, &d, plan)?;
            Ok((cert, Some(route)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_basis_vector;
    use crate::catalog;
    use crate::deriv::{central_derivation_space, derivation_space, inner_derivation};
    use crate::matrix::{basis_vector, vec_add};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn quick_plan() -> SamplingPlan {
        SamplingPlan {
            seed: Some(42),
            random_points: 50,
            exhaustive_cutoff: 256,
        }
    }

    #[test]
    fn identity_is_an_automorphism() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let check = is_automorphism(&h1, &LinearMap::identity(3, q())).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn scaling_is_an_automorphism() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let psi = scaling_automorphism(&h1, &Scalar::from_int(2, q())).unwrap();
        // original order (e_{-1}, e_0, e_1): weights (2, 4, 2)
        assert_eq!(
            psi.apply(&basis_vector(3, 1, q())),
            vec_scale(&Scalar::from_int(4, q()), &basis_vector(3, 1, q()))
        );
        let f5 = FieldSpec::prime_field(5).unwrap();
        let h1f5 = catalog::heisenberg(1, f5).unwrap();
        let psi5 = scaling_automorphism(&h1f5, &Scalar::from_int(2, f5)).unwrap();
        assert_eq!(
            psi5.apply(&basis_vector(3, 1, f5)),
            vec_scale(&Scalar::from_int(4, f5), &basis_vector(3, 1, f5))
        );
        assert!(scaling_automorphism(&h1, &Scalar::zero(q())).is_err());
        assert!(
            scaling_automorphism(&h1, &Scalar::one(q())).unwrap().map()
                == &LinearMap::identity(3, q())
        );
    }

    #[test]
    fn scaling_composes_multiplicatively() {
        let h2 = catalog::heisenberg(2, q()).unwrap();
        let a = Scalar::from_int(2, q());
        let b = Scalar::from_int(3, q());
        let psi_a = scaling_automorphism(&h2, &a).unwrap();
        let psi_b = scaling_automorphism(&h2, &b).unwrap();
        let psi_ab = scaling_automorphism(&h2, &(&a * &b)).unwrap();
        let composed = psi_a.compose(&h2, &psi_b).unwrap();
        assert_eq!(composed.map(), psi_ab.map());
    }

    #[test]
    fn doubling_only_the_center_is_not_an_automorphism() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let mut nabla = LinearMap::identity(3, q());
        let mut col = zero_vector(3, q());
        col[1] = Scalar::from_int(2, q());
        nabla.set_column(1, &col);
        let check = is_automorphism(&h1, &nabla).unwrap();
        assert!(!check.ok && check.invertible);
        let f = check.failure.unwrap();
        // residual = nabla(e_0) - [nabla e_{-1}, nabla e_1] = 2e_0 - e_0
        assert_eq!(f.residual, basis_vector(3, 1, q()));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let e = exp_nilpotent(&h1, &LinearMap::zero(3, q())).unwrap();
        assert_eq!(e.map(), &LinearMap::identity(3, q()));
    }

    #[test]
    fn exp_of_square_zero_derivations() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        // central derivation: e_{-1} -> 3 e_0
        let mut d = LinearMap::zero(3, q());
        d.set_column(
            0,
            &vec_scale(&Scalar::from_int(3, q()), &basis_vector(3, 1, q())),
        );
        let e = exp_nilpotent(&h1, &d).unwrap();
        assert_eq!(e.map(), &LinearMap::identity(3, q()).add(&d));
        // exp(d) exp(-d) = identity
        let e_neg = exp_nilpotent(&h1, &d.neg()).unwrap();
        let composed = e.compose(&h1, &e_neg).unwrap();
        assert_eq!(composed.map(), &LinearMap::identity(3, q()));
    }

    #[test]
    fn exp_characteristic_restrictions() {
        let f3 = FieldSpec::prime_field(3).unwrap();
        let w4 = catalog::witt(4, f3).unwrap();
        let ad = inner_derivation(&w4, &algebra_basis_vector(&w4, 0)).unwrap();
        assert_eq!(ad.nilpotency_index(), Some(3));
        assert!(exp_nilpotent(&w4, &ad).is_ok());

        // over F2 the witt(4) coefficient 2 vanishes and ad e_1 squares to
        // zero, so the factorial obstruction needs a map of index 3:
        // ad e_2 on witt(5) sends e_1 -> e_3 -> e_5
        let f2 = FieldSpec::prime_field(2).unwrap();
        let w5f2 = catalog::witt(5, f2).unwrap();
        let ad2 = inner_derivation(&w5f2, &algebra_basis_vector(&w5f2, 1)).unwrap();
        assert_eq!(ad2.nilpotency_index(), Some(3));
        assert!(matches!(
            exp_nilpotent(&w5f2, &ad2),
            Err(Error::FactorialNotInvertible { k: 2, modulus: 2 })
        ));

        let h1 = catalog::heisenberg(1, q()).unwrap();
        assert!(matches!(
            exp_nilpotent(&h1, &LinearMap::identity(3, q())),
            Err(Error::NotADerivation { .. })
        ));
        let grading = crate::deriv::grading_derivation(&h1, &Scalar::one(q())).unwrap();
        assert!(matches!(
            exp_nilpotent(&h1, &grading),
            Err(Error::NotNilpotentMap)
        ));
    }

    #[test]
    fn two_step_certificate_on_heisenberg() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let eps = Scalar::from_int(2, q());
        let cert = two_step_pure_local_automorphism(&h1, &eps, &quick_plan()).unwrap();
        verify_aut_certificate(&h1, &cert).unwrap();
        // candidate fixes generators and scales the center by 4
        let e0 = basis_vector(3, 1, q());
        assert_eq!(
            cert.map.apply(&e0),
            vec_scale(&Scalar::from_int(4, q()), &e0)
        );
        assert_eq!(
            cert.map.apply(&basis_vector(3, 0, q())),
            basis_vector(3, 0, q())
        );
    }

    #[test]
    fn two_step_witness_at_the_proof_point() {
        // x = e_1 + e_0: the witness is the identity plus e_1 -> 3 e_0, so
        // phi(x) = e_1 + 4 e_0 = nabla(x).
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let eps = Scalar::from_int(2, q());
        let cert = two_step_pure_local_automorphism(&h1, &eps, &quick_plan()).unwrap();
        let x = vec_add(&basis_vector(3, 2, q()), &basis_vector(3, 1, q()));
        let w = cert.witnesses.iter().find(|w| w.point == x).unwrap();
        assert_eq!(w.tag, WitnessTag::GeneratorCase);
        assert_eq!(
            w.map.apply(&basis_vector(3, 2, q())),
            vec_add(
                &basis_vector(3, 2, q()),
                &vec_scale(&Scalar::from_int(3, q()), &basis_vector(3, 1, q()))
            )
        );
        assert_eq!(w.map.apply(&x), cert.map.apply(&x));
    }

    #[test]
    fn no_suitable_scalar_in_small_fields() {
        let f3 = FieldSpec::prime_field(3).unwrap();
        let h1 = catalog::heisenberg(1, f3).unwrap();
        for e in 1..3i64 {
            assert!(matches!(
                two_step_pure_local_automorphism(&h1, &Scalar::from_int(e, f3), &quick_plan()),
                Err(Error::NoSuitableScalar { .. })
            ));
        }
        let h1q = catalog::heisenberg(1, q()).unwrap();
        assert!(matches!(
            two_step_pure_local_automorphism(&h1q, &Scalar::one(q()), &quick_plan()),
            Err(Error::UnsuitableEpsilon { .. })
        ));
    }

    #[test]
    fn restriction_certificate_on_witt() {
        for n in [4usize, 5, 6] {
            let w = catalog::witt(n, q()).unwrap();
            let (d, _) = crate::localder::find_center_targeting_derivation(&w)
                .unwrap()
                .unwrap();
            let cert = restriction_pure_local_automorphism(&w, &d, &quick_plan()).unwrap();
            verify_aut_certificate(&w, &cert).unwrap();
            // nabla(e_3) = e_3 + d(e_3), generators fixed
            let e3 = basis_vector(n, 2, q());
            assert_eq!(cert.map.apply(&e3), vec_add(&e3, &d.apply(&e3)));
            assert_eq!(
                cert.map.apply(&basis_vector(n, 0, q())),
                basis_vector(n, 0, q())
            );
        }
    }

    #[test]
    fn witness_families_work_standalone() {
        let h1 = catalog::heisenberg(1, q()).unwrap();
        let eps = Scalar::from_int(2, q());
        let cert = two_step_pure_local_automorphism(&h1, &eps, &quick_plan()).unwrap();
        let x = vec_add(&basis_vector(3, 0, q()), &basis_vector(3, 1, q()));
        let w = automorphism_witness_at(
            &h1,
            &cert.map,
            &x,
            AutWitnessFamily::TwoStepCases { eps: &eps },
        )
        .unwrap()
        .unwrap();
        assert_eq!(w.apply(&x), cert.map.apply(&x));

        let ders = derivation_space(&h1);
        let w2 = automorphism_witness_at(
            &h1,
            &cert.map,
            &x,
            AutWitnessFamily::ExpDerivationSolve { ders: &ders },
        )
        .unwrap()
        .unwrap();
        assert_eq!(w2.apply(&x), cert.map.apply(&x));

        // the identity candidate has the identity witness everywhere
        let id = LinearMap::identity(3, q());
        let w3 = automorphism_witness_at(
            &h1,
            &id,
            &x,
            AutWitnessFamily::ExpDerivationSolve { ders: &ders },
        )
        .unwrap()
        .unwrap();
        assert_eq!(w3.map(), &id);
    }

    #[test]
    fn central_derivations_exponentiate_to_automorphisms() {
        let h2 = catalog::heisenberg(2, q()).unwrap();
        let space = central_derivation_space(&h2);
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let mut d = LinearMap::zero(5, q());
            for flat in space.basis_rows() {
                let c = crate::sample::random_scalar(&mut rng, q());
                if !c.is_zero() {
                    let basis_map = LinearMap::from_flat(5, q(), &flat).unwrap();
                    d = d.add(&basis_map.scale(&c));
                }
            }
            assert!(
                d.compose(&d).is_zero(),
                "central derivations square to zero here"
            );
            let e = exp_nilpotent(&h2, &d).unwrap();
            assert!(is_automorphism(&h2, e.map()).unwrap().ok);
        }
    }
}
