//! JSON interchange for tables, maps, probe lists and certificates.
//!
//! Scalars travel as exact strings, never as numbers; parse(serialize(t))
//! is the identity on canonical tables (completion "none" with every stored
//! ordered pair written out).

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraTable, Completion, TableBuilder};
use crate::autolocal::PureLocalAutCertificate;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linmap::LinearMap;
use crate::localder::{LocalWitness, PairFailure, PureLocalDerCertificate, WitnessTag};
use crate::matrix::Matrix;

#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraDto {
    pub name: String,
    pub dim: usize,
    pub field: String,
    pub complete: String,
    pub products: Vec<ProductDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProductDto {
    pub i: usize,
    pub j: usize,
    pub rhs: Vec<TermDto>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermDto {
    pub k: usize,
    pub c: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MapDto {
    pub dim: usize,
    pub field: String,
    /// Row-major matrix; column j is the image of e_{j+1}.
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ProbeSetDto {
    pub dim: usize,
    pub field: String,
    pub probes: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FailureDto {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub residual: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WitnessDto {
    pub point: Vec<String>,
    pub map: Vec<Vec<String>>,
    pub tag: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateDto {
    /// "pure-local-derivation" or "pure-local-automorphism"
    pub kind: String,
    pub algebra: String,
    pub dim: usize,
    pub field: String,
    pub map: Vec<Vec<String>>,
    pub failure: FailureDto,
    pub strategy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    pub witnesses: Vec<WitnessDto>,
    pub extra_points_checked: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

pub const KIND_DERIVATION: &str = "pure-local-derivation";
pub const KIND_AUTOMORPHISM: &str = "pure-local-automorphism";

fn vec_to_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::serialized).collect()
}

fn strings_to_vec(strings: &[String], field: FieldSpec) -> Result<Vec<Scalar>> {
    strings.iter().map(|s| Scalar::parse(s, field)).collect()
}

fn map_to_rows(m: &LinearMap) -> Vec<Vec<String>> {
    (0..m.dim())
        .map(|r| vec_to_strings(m.matrix().row(r)))
        .collect()
}

fn rows_to_map(rows: &[Vec<String>], dim: usize, field: FieldSpec) -> Result<LinearMap> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch {
            context: "map row count",
            expected: dim,
            found: rows.len(),
        });
    }
    let mut data = Vec::with_capacity(dim * dim);
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "map row length",
                expected: dim,
                found: row.len(),
            });
        }
        for s in row {
            data.push(Scalar::parse(s, field)?);
        }
    }
    LinearMap::from_flat(dim, field, &data)
}

// --- algebra tables --------------------------------------------------------

pub fn algebra_to_dto(a: &AlgebraTable) -> AlgebraDto {
    let products = a
        .products()
        .iter()
        .map(|(&(i, j), rhs)| ProductDto {
            i: i + 1,
            j: j + 1,
            rhs: rhs
                .iter()
                .map(|(k, c)| TermDto {
                    k: k + 1,
                    c: c.serialized(),
                })
                .collect(),
        })
        .collect();
    AlgebraDto {
        name: a.name().to_string(),
        dim: a.dim(),
        field: a.field().to_string(),
        complete: Completion::None.as_str().to_string(),
        products,
    }
}

pub fn algebra_from_dto(dto: &AlgebraDto) -> Result<AlgebraTable> {
    let field = FieldSpec::parse(&dto.field)?;
    let completion = Completion::parse(&dto.complete).ok_or_else(|| Error::InvalidParameter {
        name: "complete",
        reason: format!("unknown completion {:?}", dto.complete),
    })?;
    let mut builder = TableBuilder::new(dto.name.clone(), dto.dim, field);
    for p in &dto.products {
        if p.i == 0 || p.j == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                dim: dto.dim,
            });
        }
        let mut rhs = Vec::with_capacity(p.rhs.len());
        for t in &p.rhs {
            if t.k == 0 {
                return Err(Error::IndexOutOfRange {
                    index: 0,
                    dim: dto.dim,
                });
            }
            rhs.push((t.k - 1, Scalar::parse(&t.c, field)?));
        }
        builder.product(p.i - 1, p.j - 1, rhs)?;
    }
    builder.complete(completion)?;
    builder.build()
}

pub fn algebra_to_json(a: &AlgebraTable) -> String {
    serde_json::to_string(&algebra_to_dto(a)).expect("serialization is infallible")
}

pub fn algebra_from_json(text: &str) -> Result<AlgebraTable> {
    let dto: AlgebraDto = serde_json::from_str(text)?;
    algebra_from_dto(&dto)
}

// --- linear maps ------------------------------------------------------------

pub fn map_to_json(m: &LinearMap) -> String {
    let dto = MapDto {
        dim: m.dim(),
        field: m.field().to_string(),
        rows: map_to_rows(m),
    };
    serde_json::to_string(&dto).expect("serialization is infallible")
}

pub fn map_from_json(text: &str) -> Result<LinearMap> {
    let dto: MapDto = serde_json::from_str(text)?;
    let field = FieldSpec::parse(&dto.field)?;
    rows_to_map(&dto.rows, dto.dim, field)
}

// --- probe lists -------------------------------------------------------------

pub fn probes_to_json(dim: usize, field: FieldSpec, probes: &[Vec<Scalar>]) -> String {
    let dto = ProbeSetDto {
        dim,
        field: field.to_string(),
        probes: probes.iter().map(|p| vec_to_strings(p)).collect(),
    };
    serde_json::to_string(&dto).expect("serialization is infallible")
}

pub fn probes_from_json(text: &str) -> Result<(usize, FieldSpec, Vec<Vec<Scalar>>)> {
    let dto: ProbeSetDto = serde_json::from_str(text)?;
    let field = FieldSpec::parse(&dto.field)?;
    let mut probes = Vec::with_capacity(dto.probes.len());
    for p in &dto.probes {
        if p.len() != dto.dim {
            return Err(Error::DimensionMismatch {
                context: "probe length",
                expected: dto.dim,
                found: p.len(),
            });
        }
        probes.push(strings_to_vec(p, field)?);
    }
    Ok((dto.dim, field, probes))
}

// --- certificates -------------------------------------------------------------

fn witnesses_to_dto(witnesses: &[LocalWitness]) -> Vec<WitnessDto> {
    witnesses
        .iter()
        .map(|w| WitnessDto {
            point: vec_to_strings(&w.point),
            map: map_to_rows(&w.map),
            tag: w.tag.as_str().to_string(),
        })
        .collect()
}

fn witnesses_from_dto(dtos: &[WitnessDto], dim: usize, field: FieldSpec) -> Result<Vec<LocalWitness>> {
    dtos.iter()
        .map(|w| {
            Ok(LocalWitness {
                point: strings_to_vec(&w.point, field)?,
                map: rows_to_map(&w.map, dim, field)?,
                tag: WitnessTag::parse(&w.tag).ok_or_else(|| Error::InvalidParameter {
                    name: "tag",
                    reason: format!("unknown witness tag {:?}", w.tag),
                })?,
            })
        })
        .collect()
}

fn failure_to_dto(f: &PairFailure) -> FailureDto {
    FailureDto {
        left: vec_to_strings(&f.left),
        right: vec_to_strings(&f.right),
        residual: vec_to_strings(&f.residual),
    }
}

fn failure_from_dto(dto: &FailureDto, field: FieldSpec) -> Result<PairFailure> {
    Ok(PairFailure {
        left: strings_to_vec(&dto.left, field)?,
        right: strings_to_vec(&dto.right, field)?,
        residual: strings_to_vec(&dto.residual, field)?,
    })
}

pub fn der_certificate_to_json(cert: &PureLocalDerCertificate) -> String {
    let dto = CertificateDto {
        kind: KIND_DERIVATION.to_string(),
        algebra: cert.algebra.clone(),
        dim: cert.dim,
        field: cert.field.to_string(),
        map: map_to_rows(&cert.map),
        failure: failure_to_dto(&cert.failure),
        strategy: cert.strategy.clone(),
        epsilon: None,
        witnesses: witnesses_to_dto(&cert.witnesses),
        extra_points_checked: cert.extra_points_checked,
        exhaustive: cert.exhaustive,
        seed: cert.seed,
    };
    serde_json::to_string(&dto).expect("serialization is infallible")
}

pub fn der_certificate_from_json(text: &str) -> Result<PureLocalDerCertificate> {
    let dto: CertificateDto = serde_json::from_str(text)?;
    if dto.kind != KIND_DERIVATION {
        return Err(Error::InvalidParameter {
            name: "kind",
            reason: format!("expected {KIND_DERIVATION:?}, found {:?}", dto.kind),
        });
    }
    let field = FieldSpec::parse(&dto.field)?;
    Ok(PureLocalDerCertificate {
        algebra: dto.algebra,
        dim: dto.dim,
        field,
        map: rows_to_map(&dto.map, dto.dim, field)?,
        failure: failure_from_dto(&dto.failure, field)?,
        strategy: dto.strategy,
        witnesses: witnesses_from_dto(&dto.witnesses, dto.dim, field)?,
        extra_points_checked: dto.extra_points_checked,
        exhaustive: dto.exhaustive,
        seed: dto.seed,
    })
}

pub fn aut_certificate_to_json(cert: &PureLocalAutCertificate) -> String {
    let dto = CertificateDto {
        kind: KIND_AUTOMORPHISM.to_string(),
        algebra: cert.algebra.clone(),
        dim: cert.dim,
        field: cert.field.to_string(),
        map: map_to_rows(&cert.map),
        failure: failure_to_dto(&cert.failure),
        strategy: cert.strategy.clone(),
        epsilon: cert.epsilon.as_ref().map(Scalar::serialized),
        witnesses: witnesses_to_dto(&cert.witnesses),
        extra_points_checked: cert.extra_points_checked,
        exhaustive: cert.exhaustive,
        seed: cert.seed,
    };
    serde_json::to_string(&dto).expect("serialization is infallible")
}

pub fn aut_certificate_from_json(text: &str) -> Result<PureLocalAutCertificate> {
    let dto: CertificateDto = serde_json::from_str(text)?;
    if dto.kind != KIND_AUTOMORPHISM {
        return Err(Error::InvalidParameter {
            name: "kind",
            reason: format!("expected {KIND_AUTOMORPHISM:?}, found {:?}", dto.kind),
        });
    }
    let field = FieldSpec::parse(&dto.field)?;
    let epsilon = dto
        .epsilon
        .as_ref()
        .map(|e| Scalar::parse(e, field))
        .transpose()?;
    Ok(PureLocalAutCertificate {
        algebra: dto.algebra,
        dim: dto.dim,
        field,
        map: rows_to_map(&dto.map, dto.dim, field)?,
        failure: failure_from_dto(&dto.failure, field)?,
        strategy: dto.strategy,
        epsilon,
        witnesses: witnesses_from_dto(&dto.witnesses, dto.dim, field)?,
        extra_points_checked: dto.extra_points_checked,
        exhaustive: dto.exhaustive,
        seed: dto.seed,
    })
}

/// Matrix rows as serialized strings (shared by CLI renderers).
pub fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| vec_to_strings(m.row(r))).collect()
}
