//! Constructions and certification of local derivations that are not
//! derivations, together with the falsification search and the
//! probe-refinement upper bound on the space of local derivations.
//!
//! Three verdict kinds are possible, all sound:
//! - a certificate (the constructed map fails the Leibniz identity at a
//!   recorded pair, and every sampled point carries a verified witness
//!   derivation hitting the map's value there);
//! - certified-not-local (falsify found a point where no derivation can
//!   match the candidate);
//! - a probe report whose upper bound either pins LocDer to Der or stays
//!   inconclusive. Membership over an infinite field is not decidable by
//!   finite sampling, so no fourth kind exists.

use crate::algebra::{restrict_map, AdaptedBasis, AlgebraTable, Nilindex};
use crate::deriv::{
    self, center_targeting_space, grading_derivation, inner_derivation, is_derivation,
    leibniz_residual, two_generated_derivation, DerivationBasis,
};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linmap::LinearMap;
use crate::matrix::{basis_vector, format_vector, vec_add, vec_is_zero, zero_vector, Matrix};
use crate::sample::{enumerate_vectors, exhaustive_count, random_vector, rng_from_seed};
use crate::subspace::Subspace;

/// How per-point witnesses are sampled beyond the structured probes.
#[derive(Debug, Clone)]
pub struct SamplingPlan {
    /// Required as soon as random points are actually drawn.
    pub seed: Option<u64>,
    pub random_points: usize,
    /// When the field is finite and |F|^n stays within this cutoff, every
    /// point of the space is checked instead of sampling.
    pub exhaustive_cutoff: u128,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            seed: None,
            random_points: 1000,
            exhaustive_cutoff: 1024,
        }
    }
}

impl SamplingPlan {
    pub fn seeded(seed: u64) -> Self {
        SamplingPlan {
            seed: Some(seed),
            ..SamplingPlan::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessTag {
    GeneratorCase,
    DeepCase,
    LinearSolve,
}

impl WitnessTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessTag::GeneratorCase => "generator-case",
            WitnessTag::DeepCase => "deep-case",
            WitnessTag::LinearSolve => "linear-solve",
        }
    }

    pub fn parse(text: &str) -> Option<WitnessTag> {
        match text {
            "generator-case" => Some(WitnessTag::GeneratorCase),
            "deep-case" => Some(WitnessTag::DeepCase),
            "linear-solve" => Some(WitnessTag::LinearSolve),
            _ => None,
        }
    }
}

/// A verified pointwise witness: a derivation agreeing with the candidate at
/// the point.
#[derive(Debug, Clone)]
pub struct LocalWitness {
    pub point: Vec<Scalar>,
    pub map: LinearMap,
    pub tag: WitnessTag,
}

/// A pair of vectors where an identity fails, with the nonzero residual.
#[derive(Debug, Clone)]
pub struct PairFailure {
    pub left: Vec<Scalar>,
    pub right: Vec<Scalar>,
    pub residual: Vec<Scalar>,
}

#[derive(Debug, Clone)]
pub struct PureLocalDerCertificate {
    pub algebra: String,
    pub dim: usize,
    pub field: FieldSpec,
    /// The local derivation that is not a derivation.
    pub map: LinearMap,
    pub failure: PairFailure,
    pub strategy: String,
    /// Witnesses at the structured probes (basis vectors, pair sums, the
    /// generator sum and the full sum).
    pub witnesses: Vec<LocalWitness>,
    /// Points checked beyond the structured probes; their witnesses are
    /// verified but not stored.
    pub extra_points_checked: usize,
    /// Whether the extra points enumerated the whole space.
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

/// Solves for a witness derivation at one point: coefficients c with
/// sum c_k D_k(x) = candidate(x) over the derivation basis. The returned
/// combination is re-verified before being handed out.
pub fn derivation_witness_at(
    a: &AlgebraTable,
    ders: &DerivationBasis,
    candidate: &LinearMap,
    x: &[Scalar],
) -> Result<Option<LinearMap>> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "point length",
            expected: a.dim(),
            found: x.len(),
        });
    }
    let n = a.dim();
    let field = a.field();
    let target = candidate.apply(x);
    if ders.maps.is_empty() {
        return Ok(if vec_is_zero(&target) {
            Some(LinearMap::zero(n, field))
        } else {
            None
        });
    }
    let system = Matrix::from_fn(n, ders.maps.len(), field, |r, c| {
        ders.maps[c].apply(x)[r].clone()
    });
    let Some(coeffs) = system.solve(&target) else {
        return Ok(None);
    };
    let mut witness = LinearMap::zero(n, field);
    for (c, d) in coeffs.iter().zip(&ders.maps) {
        if !c.is_zero() {
            witness = witness.add(&d.scale(c));
        }
    }
    let check = is_derivation(a, &witness)?;
    if !check.ok || witness.apply(x) != target {
        return Err(Error::Verification {
            context: "solved witness failed re-verification".into(),
        });
    }
    Ok(Some(witness))
}

/// Structured probe set: basis vectors, all pairwise sums, the sum of the
/// adapted generators (when the table is nilpotent) and the sum of all
/// basis vectors.
pub fn default_probes(a: &AlgebraTable) -> Vec<Vec<Scalar>> {
    let n = a.dim();
    let field = a.field();
    let mut probes: Vec<Vec<Scalar>> = (0..n).map(|i| basis_vector(n, i, field)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            probes.push(vec_add(
                &basis_vector(n, i, field),
                &basis_vector(n, j, field),
            ));
        }
    }
    if let Ok((_, adapted)) = a.adapted_basis() {
        let mut gen_sum = zero_vector(n, field);
        for q in 0..adapted.generator_count() {
            gen_sum = vec_add(&gen_sum, &adapted.basis_vector_original(q));
        }
        if !probes.contains(&gen_sum) {
            probes.push(gen_sum);
        }
    }
    let all_sum = (0..n).fold(zero_vector(n, field), |acc, i| {
        vec_add(&acc, &basis_vector(n, i, field))
    });
    if !probes.contains(&all_sum) {
        probes.push(all_sum);
    }
    probes
}

enum DeepFallback<'a> {
    /// 2-step: the grading derivation with unit weight.
    Grading,
    /// restriction: the producing derivation itself.
    Derivation(&'a LinearMap),
}

/// Case-split witness formulas for a constructed candidate: a nonzero
/// generator coordinate yields a rank-one central derivation; otherwise the
/// fallback derivation already agrees with the candidate on the deep span.
struct CaseSplitWitnesses<'a> {
    algebra: &'a AlgebraTable,
    adapted: &'a AdaptedBasis,
    candidate: &'a LinearMap,
    deep_fallback: DeepFallback<'a>,
}

impl CaseSplitWitnesses<'_> {
    fn witness_for(&self, x: &[Scalar]) -> Result<LocalWitness> {
        let n = self.algebra.dim();
        let field = self.algebra.field();
        let m = self.adapted.generator_count();
        let coords = self.adapted.to_adapted_vec(x);
        let pivot = (0..m).find(|&j| !coords[j].is_zero());
        let target = self.candidate.apply(x);
        let (map, tag) = match pivot {
            Some(j) => {
                let inv = coords[j].inverse().expect("pivot coordinate is nonzero");
                let col = self.adapted.to_adapted_vec(&target);
                let mut d = LinearMap::zero(n, field);
                d.set_column(j, &crate::matrix::vec_scale(&inv, &col));
                (self.adapted.to_original_map(&d), WitnessTag::GeneratorCase)
            }
            None => {
                let d = match self.deep_fallback {
                    DeepFallback::Grading => grading_derivation(self.algebra, &Scalar::one(field))?,
                    DeepFallback::Derivation(d) => d.clone(),
                };
                (d, WitnessTag::DeepCase)
            }
        };
        let check = is_derivation(self.algebra, &map)?;
        if !check.ok || map.apply(x) != target {
            return Err(Error::WitnessUnavailable {
                point: format_vector(x),
            });
        }
        Ok(LocalWitness {
            point: x.to_vec(),
            map,
            tag,
        })
    }
}

fn sampled_points(a: &AlgebraTable, plan: &SamplingPlan) -> Result<(Vec<Vec<Scalar>>, bool)> {
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

fn certify(
    a: &AlgebraTable,
    adapted: &AdaptedBasis,
    candidate: LinearMap,
    failure: PairFailure,
    strategy: String,
    deep_fallback: DeepFallback<'_>,
    plan: &SamplingPlan,
) -> Result<PureLocalDerCertificate> {
    assert!(
        !vec_is_zero(&failure.residual),
        "certificate failure residual must be nonzero"
    );
    let recomputed = leibniz_residual(a, &candidate, &failure.left, &failure.right)?;
    assert_eq!(recomputed, failure.residual, "stored residual recomputes");
    let check = is_derivation(a, &candidate)?;
    assert!(!check.ok, "the candidate must fail the Leibniz identity");

    let witnesses_for = CaseSplitWitnesses {
        algebra: a,
        adapted,
        candidate: &candidate,
        deep_fallback,
    };
    let mut witnesses = Vec::new();
    for x in default_probes(a) {
        witnesses.push(witnesses_for.witness_for(&x)?);
    }
    let (points, exhaustive) = sampled_points(a, plan)?;
    let extra_points_checked = points.len();
    for x in &points {
        witnesses_for.witness_for(x)?;
    }
    Ok(PureLocalDerCertificate {
        algebra: a.name().to_string(),
        dim: a.dim(),
        field: a.field(),
        map: candidate,
        failure,
        strategy,
        witnesses,
        extra_points_checked,
        exhaustive,
        seed: plan.seed,
    })
}

/// First pair of adapted generators with a nonzero bracket accepted by the
/// filter; returned in original coordinates together with the bracket.
fn generator_pair_with<F>(
    a: &AlgebraTable,
    adapted: &AdaptedBasis,
    mut accept: F,
) -> Option<(Vec<Scalar>, Vec<Scalar>, Vec<Scalar>)>
where
    F: FnMut(&[Scalar]) -> bool,
{
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

/// The 2-step construction: zero on a generating complement, doubling on the
/// derived subalgebra. Degenerates over characteristic 2, where the doubling
/// collapses to the zero map.
pub fn two_step_pure_local_derivation(
    a: &AlgebraTable,
    plan: &SamplingPlan,
) -> Result<PureLocalDerCertificate> {
    if a.field().characteristic() == 2 {
        return Err(Error::DegenerateInChar2);
    }
    let (_, adapted) = deriv::two_step_adapted(a)?;
    let n = a.dim();
    let field = a.field();
    let m = adapted.generator_count();
    let two = Scalar::from_int(2, field);

    let mut delta_adapted = LinearMap::zero(n, field);
    for q in m..n {
        let mut col = zero_vector(n, field);
        col[q] = two.clone();
        delta_adapted.set_column(q, &col);
    }
    let delta = adapted.to_original_map(&delta_adapted);

    let (left, right, _) = generator_pair_with(a, &adapted, |_| true)
        .expect("a 2-step table has a nonzero bracket of generators");
    let residual = leibniz_residual(a, &delta, &left, &right)?;
    let failure = PairFailure {
        left,
        right,
        residual,
    };
    let strategy = format!(
        "vanishes on the {m} generator positions and doubles the derived subalgebra; \
         generator case: rank-one central derivation scaled by 2 over the pivot \
         coordinate; deep case: grading derivation with unit weight"
    );
    certify(
        a,
        &adapted,
        delta,
        failure,
        strategy,
        DeepFallback::Grading,
        plan,
    )
}

/// Routes for producing a derivation sending the derived subalgebra into the
/// center while acting nontrivially on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationRoute {
    /// nilindex 4: ad x for a basis vector x not annihilating the derived
    /// subalgebra.
    AdjointNilindexFour,
    /// nilindex >= 5 with the (p-3)-rd layer not annihilating the derived
    /// subalgebra: ad x for x in that layer.
    AdjointDeepLayer,
    /// two-generated tables: the explicit generator construction.
    TwoGenerated,
    /// general search inside the center-targeting subspace.
    CenterTargetingSearch,
}

impl DerivationRoute {
    pub fn as_str(&self) -> &'static str {
        match self {
            DerivationRoute::AdjointNilindexFour => "adjoint-nilindex-4",
            DerivationRoute::AdjointDeepLayer => "adjoint-deep-layer",
            DerivationRoute::TwoGenerated => "two-generated",
            DerivationRoute::CenterTargetingSearch => "center-targeting-search",
        }
    }
}

/// Searches, in a fixed order of increasing generality, for a derivation
/// usable by the restriction construction.
pub fn find_center_targeting_derivation(
    a: &AlgebraTable,
) -> Result<Option<(LinearMap, DerivationRoute)>> {
    if !a.is_lie() {
        return Err(Error::NotLieTable {
            context: "center-targeting derivation search",
        });
    }
    let series = a.lower_central_series();
    let p = match series.nilindex {
        Nilindex::Finite(p) => p,
        Nilindex::NotNilpotent => return Err(Error::NotNilpotent),
    };
    if p < 4 {
        return Err(Error::WrongNilindex {
            expected: ">= 4".into(),
            found: p.to_string(),
        });
    }
    let n = a.dim();
    let field = a.field();
    let derived = &series.layers[1];

    let hits_derived = |x: &[Scalar]| -> bool {
        derived
            .basis_rows()
            .iter()
            .any(|w| !vec_is_zero(&a.bracket(x, w).expect("lengths agree")))
    };

    if p == 4 {
        for i in 0..n {
            let x = basis_vector(n, i, field);
            if hits_derived(&x) {
                let d = inner_derivation(a, &x)?;
                return Ok(Some((d, DerivationRoute::AdjointNilindexFour)));
            }
        }
    }

    if p >= 5 {
        let deep_layer = &series.layers[p - 4]; // the (p-3)-rd layer
        for x in deep_layer.basis_rows() {
            if hits_derived(&x) {
                let d = inner_derivation(a, &x)?;
                return Ok(Some((d, DerivationRoute::AdjointDeepLayer)));
            }
        }
    }

    let (_, adapted) = a.adapted_basis()?;
    if adapted.generator_count() == 2 {
        if let Some(d) = two_generated_derivation(a)? {
            return Ok(Some((d, DerivationRoute::TwoGenerated)));
        }
    }

    let space = center_targeting_space(a);
    let third = &series.layers[2];
    let mut result = None;
    generator_pair_with(a, &adapted, |w| {
        if third.contains_vector(w).unwrap_or(true) {
            return false;
        }
        for flat in space.basis_rows() {
            let d = LinearMap::from_flat(n, field, &flat).expect("length n^2");
            if !vec_is_zero(&d.apply(w)) {
                result = Some(d);
                return true;
            }
        }
        false
    });
    Ok(result.map(|d| (d, DerivationRoute::CenterTargetingSearch)))
}

/// The restriction construction: the candidate agrees with `d` on the
/// derived-subalgebra positions of the adapted basis and vanishes on the
/// generator positions.
pub fn restriction_pure_local_derivation(
    a: &AlgebraTable,
    d: &LinearMap,
    plan: &SamplingPlan,
) -> Result<PureLocalDerCertificate> {
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
        Nilindex::Finite(p) => p,
        Nilindex::NotNilpotent => return Err(Error::NotNilpotent),
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
    let (_, adapted) = a.adapted_basis()?;
    let n = a.dim();
    let m = adapted.generator_count();
    let third = &series.layers[2];

    // the producing pair: generators whose bracket escapes the third layer
    // and is not annihilated by d; a pair with a deeper bracket still
    // falsifies the Leibniz identity and is kept as a fallback
    let preferred = generator_pair_with(a, &adapted, |w| {
        !third.contains_vector(w).unwrap_or(true) && !vec_is_zero(&d.apply(w))
    });
    let fallback = generator_pair_with(a, &adapted, |w| !vec_is_zero(&d.apply(w)));
    let (left, right, _) = preferred
        .or(fallback)
        .ok_or(Error::RestrictionPrecondition {
            reason: "derivation vanishes on every bracket of adapted generators".into(),
        })?;

    let deep_positions: Vec<usize> = (m..n).collect();
    let delta_adapted = restrict_map(&adapted.to_adapted_map(d), &deep_positions);
    let delta = adapted.to_original_map(&delta_adapted);

    let residual = leibniz_residual(a, &delta, &left, &right)?;
    let failure = PairFailure {
        left,
        right,
        residual,
    };
    let strategy = format!(
        "restriction of the supplied derivation to the {} derived-subalgebra \
         positions of the adapted basis; generator case: rank-one central \
         derivation scaled by the inverse pivot coordinate; deep case: the \
         supplied derivation itself",
        n - m
    );
    certify(
        a,
        &adapted,
        delta,
        failure,
        strategy,
        DeepFallback::Derivation(d),
        plan,
    )
}

/// Structured probes first, then seeded random points. Returns the first
/// point where no derivation matches the candidate's value.
pub fn falsify(
    a: &AlgebraTable,
    ders: &DerivationBasis,
    candidate: &LinearMap,
    seed: u64,
    budget: usize,
) -> Result<Option<Vec<Scalar>>> {
    for x in default_probes(a) {
        if derivation_witness_at(a, ders, candidate, &x)?.is_none() {
            return Ok(Some(x));
        }
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..budget {
        let x = random_vector(&mut rng, a.dim(), a.field());
        if derivation_witness_at(a, ders, candidate, &x)?.is_none() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeVerdict {
    LocDerEqualsDer,
    Inconclusive,
}

impl ProbeVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeVerdict::LocDerEqualsDer => "LocDerEqualsDer",
            ProbeVerdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Upper bound on the space of local derivations from finitely many probes.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    /// All probes used, including the always-added basis vectors.
    pub probes: Vec<Vec<Scalar>>,
    pub upper_bound: Subspace,
    pub der_subspace: Subspace,
    pub verdict: ProbeVerdict,
}

/// Intersects, over every probe x, the linear condition "candidate(x) lies
/// in {D(x) : D in Der}" on the candidate's entries. Every local derivation
/// satisfies each condition, so the result always contains LocDer; when it
/// equals Der, the two spaces are pinned.
pub fn local_derivation_upper_bound(
    a: &AlgebraTable,
    ders: &DerivationBasis,
    probes: &[Vec<Scalar>],
) -> Result<ProbeReport> {
    if probes.is_empty() {
        return Err(Error::EmptyProbes);
    }
    let n = a.dim();
    let field = a.field();
    let mut all: Vec<Vec<Scalar>> = (0..n).map(|i| basis_vector(n, i, field)).collect();
    for x in probes {
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                context: "probe length",
                expected: n,
                found: x.len(),
            });
        }
        for s in x {
            if s.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: s.field(),
                });
            }
        }
        if !all.contains(x) {
            all.push(x.clone());
        }
    }
    let mut rows = Vec::new();
    for x in &all {
        let ev = ders.evaluate_at(x);
        let cz = ev.constraint_matrix();
        for zr in 0..cz.rows() {
            let mut row = zero_vector(n * n, field);
            for k in 0..n {
                let zk = cz.get(zr, k);
                if zk.is_zero() {
                    continue;
                }
                for (l, xl) in x.iter().enumerate() {
                    if xl.is_zero() {
                        continue;
                    }
                    row[k * n + l] = &row[k * n + l] + &(zk * xl);
                }
            }
            if !vec_is_zero(&row) {
                rows.push(row);
            }
        }
    }
    let upper_bound = if rows.is_empty() {
        Subspace::full(n * n, field)
    } else {
        Subspace::kernel_of(&Matrix::from_rows(field, rows)?)
    };
    assert!(
        upper_bound.contains(&ders.subspace)?,
        "the upper bound must contain the derivation space"
    );
    let verdict = if upper_bound == ders.subspace {
        ProbeVerdict::LocDerEqualsDer
    } else {
        ProbeVerdict::Inconclusive
    };
    Ok(ProbeReport {
        probes: all,
        upper_bound,
        der_subspace: ders.subspace.clone(),
        verdict,
    })
}

/// Re-verifies a certificate from scratch (used after deserialization and
/// before any CLI output).
pub fn verify_der_certificate(a: &AlgebraTable, cert: &PureLocalDerCertificate) -> Result<()> {
    let fail = |context: &str| Error::Verification {
        context: context.into(),
    };
    if cert.dim != a.dim() || cert.field != a.field() {
        return Err(fail("certificate does not match the algebra"));
    }
    let check = is_derivation(a, &cert.map)?;
    if check.ok {
        return Err(fail("certificate map is a derivation"));
    }
    let residual = leibniz_residual(a, &cert.map, &cert.failure.left, &cert.failure.right)?;
    if vec_is_zero(&residual) || residual != cert.failure.residual {
        return Err(fail("stored failure residual does not recompute"));
    }
    for w in &cert.witnesses {
        let check = is_derivation(a, &w.map)?;
        if !check.ok {
            return Err(fail("stored witness is not a derivation"));
        }
        if w.map.apply(&w.point) != cert.map.apply(&w.point) {
            return Err(fail("stored witness does not match the map at its point"));
        }
    }
    Ok(())
}

/// Routes by nilindex and produces the matching certificate.
pub fn construct_pure_local_derivation(
    a: &AlgebraTable,
    plan: &SamplingPlan,
) -> Result<(PureLocalDerCertificate, Option<DerivationRoute>)> {
    let series = a.lower_central_series();
    match series.nilindex {
        Nilindex::NotNilpotent => Err(Error::NotNilpotent),
        Nilindex::Finite(p) if p <= 2 => Err(Error::WrongNilindex {
            expected: ">= 3".into(),
            found: format!("{p} (every linear map is a derivation)"),
        }),
        Nilindex::Finite(3) => Ok((two_step_pure_local_derivation(a, plan)?, None)),
        Nilindex::Finite(_) => {
            let Some((d, route)) = find_center_targeting_derivation(a)? else {
                return Err(Error::RestrictionPrecondition {
                    reason: "no center-targeting derivation found by any route".into(),
                });
            };
            let cert = restriction_pure_local_derivation(a, &d, plan)?;
            Ok((cert, Some(route)))
        }
    }
}
