//! Seeded sampling of vectors and maps, plus exhaustive enumeration over
//! small finite fields. Rational coefficients are drawn from {-2,...,2}
//! to keep exact solves fast; prime-field coefficients are uniform.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldSpec, Scalar};
use crate::linmap::LinearMap;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rationals => Scalar::from_int(rng.gen_range(-2i64..=2), field),
        FieldSpec::PrimeField(p) => Scalar::from_int(rng.gen_range(0..p) as i64, field),
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, field: FieldSpec) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(rng, field)).collect()
}

pub fn random_map(rng: &mut ChaCha8Rng, n: usize, field: FieldSpec) -> LinearMap {
    let flat = random_vector(rng, n * n, field);
    LinearMap::from_flat(n, field, &flat).expect("length n^2")
}

/// Number of vectors in F^n when the field is finite and the count fits the
/// cutoff; `None` otherwise.
pub fn exhaustive_count(field: FieldSpec, n: usize, cutoff: u128) -> Option<u128> {
    let p = field.order()? as u128;
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.checked_mul(p)?;
        if total > cutoff {
            return None;
        }
    }
    Some(total)
}

/// All vectors of GF(p)^n in lexicographic order of digit strings.
pub fn enumerate_vectors(field: FieldSpec, n: usize) -> impl Iterator<Item = Vec<Scalar>> {
    let p = field.order().expect("finite field") as usize;
    let total = p.pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(Scalar::from_int((idx % p) as i64, field));
            idx /= p;
        }
        v
    })
}
