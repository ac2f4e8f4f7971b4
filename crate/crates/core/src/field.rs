//! Exact scalars over the supported base fields: the rationals with
//! arbitrary-precision integers, and prime fields GF(p).
//!
//! Every [`Scalar`] is tagged with its [`FieldSpec`]. Arithmetic operators
//! panic on mismatched tags (a programming error); public entry points that
//! accept user data validate fields first and return typed errors. There is
//! no floating point anywhere in this crate: equality is always exact.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Moduli are capped so that sums fit in u64 and products in u128.
const MAX_MODULUS: u64 = 1 << 31;

/// Descriptor of the base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// GF(p). The modulus is checked for primality by trial division.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => p,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(p),
        }
    }

    /// Parses "Q" or "F<p>".
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = t.strip_prefix('F') {
            if let Ok(p) = rest.parse::<u64>() {
                return FieldSpec::prime_field(p);
            }
        }
        Err(Error::InvalidField(t.to_string()))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element: a reduced fraction over `Q` or a residue in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    field: FieldSpec,
    repr: Repr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rat(BigRational),
    Mod(u64),
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rationals => Scalar {
                field,
                repr: Repr::Rat(BigRational::zero()),
            },
            FieldSpec::PrimeField(_) => Scalar {
                field,
                repr: Repr::Mod(0),
            },
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Scalar::from_int(1, field)
    }

    pub fn from_int(value: i64, field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rationals => Scalar {
                field,
                repr: Repr::Rat(BigRational::from_integer(BigInt::from(value))),
            },
            FieldSpec::PrimeField(p) => Scalar {
                field,
                repr: Repr::Mod(value.rem_euclid(p as i64) as u64),
            },
        }
    }

    pub fn from_bigint(value: &BigInt, field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rationals => Scalar {
                field,
                repr: Repr::Rat(BigRational::from_integer(value.clone())),
            },
            FieldSpec::PrimeField(p) => {
                let m = BigInt::from(p);
                let r = ((value % &m) + &m) % &m;
                Scalar {
                    field,
                    repr: Repr::Mod(r.to_u64().expect("reduced residue fits u64")),
                }
            }
        }
    }

    /// num/den in the given field. Over GF(p) the denominator must be
    /// invertible.
    pub fn from_fraction(num: i64, den: i64, field: FieldSpec) -> Result<Self> {
        Scalar::from_big_fraction(&BigInt::from(num), &BigInt::from(den), field)
    }

    pub fn from_big_fraction(num: &BigInt, den: &BigInt, field: FieldSpec) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidScalar {
                text: format!("{num}/{den}"),
                field,
                reason: "zero denominator".into(),
            });
        }
        match field {
            FieldSpec::Rationals => Ok(Scalar {
                field,
                repr: Repr::Rat(BigRational::new(num.clone(), den.clone())),
            }),
            FieldSpec::PrimeField(_) => {
                let n = Scalar::from_bigint(num, field);
                let d = Scalar::from_bigint(den, field);
                match d.inverse() {
                    Some(inv) => Ok(&n * &inv),
                    None => Err(Error::InvalidScalar {
                        text: format!("{num}/{den}"),
                        field,
                        reason: format!("denominator {den} is zero in {field}"),
                    }),
                }
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Mod(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_one(),
            Repr::Mod(r) => *r == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match (&self.repr, self.field) {
            (Repr::Rat(r), _) => Some(Scalar {
                field: self.field,
                repr: Repr::Rat(r.recip()),
            }),
            (Repr::Mod(r), FieldSpec::PrimeField(p)) => Some(Scalar {
                field: self.field,
                repr: Repr::Mod(mod_inverse(*r, p)),
            }),
            _ => unreachable!("repr/field tags always agree"),
        }
    }

    /// Nonnegative integer power by repeated squaring; `pow(0) = 1`.
    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut acc = Scalar::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Canonical string form: `a` or `a/b` over Q, `r mod p` over GF(p).
    pub fn serialized(&self) -> String {
        match (&self.repr, self.field) {
            (Repr::Rat(r), _) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (Repr::Mod(r), FieldSpec::PrimeField(p)) => format!("{r} mod {p}"),
            _ => unreachable!(),
        }
    }

    /// Bare coefficient form for use where the field is clear from context
    /// (vector rendering, JSON tables): `a`, `a/b`, or the residue `r`.
    pub fn coefficient_string(&self) -> String {
        match &self.repr {
            Repr::Rat(_) => self.serialized(),
            Repr::Mod(r) => r.to_string(),
        }
    }

    /// Parses a scalar in the given field.
    ///
    /// Accepted forms: `a`, `-a`, `a/b`, and `r mod p` (the latter only in
    /// GF(p), with a matching modulus). Over GF(p) a fraction `a/b` is read
    /// as `a * b^-1` and rejected when `b` vanishes in the field.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Self> {
        let t = text.trim();
        let bad = |reason: &str| Error::InvalidScalar {
            text: t.to_string(),
            field,
            reason: reason.to_string(),
        };
        if t.is_empty() {
            return Err(bad("empty scalar"));
        }
        if let Some((r_part, p_part)) = t.split_once("mod") {
            let p: u64 = p_part
                .trim()
                .parse()
                .map_err(|_| bad("malformed modulus"))?;
            match field {
                FieldSpec::PrimeField(q) if q == p => {}
                _ => return Err(bad(&format!("modulus {p} does not match field {field}"))),
            }
            let r: BigInt = r_part
                .trim()
                .parse()
                .map_err(|_| bad("malformed residue"))?;
            return Ok(Scalar::from_bigint(&r, field));
        }
        if let Some((n_part, d_part)) = t.split_once('/') {
            let n: BigInt = n_part
                .trim()
                .parse()
                .map_err(|_| bad("malformed numerator"))?;
            let d: BigInt = d_part
                .trim()
                .parse()
                .map_err(|_| bad("malformed denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            return Scalar::from_big_fraction(&n, &d, field);
        }
        let n: BigInt = t.parse().map_err(|_| bad("malformed integer"))?;
        Ok(Scalar::from_bigint(&n, field))
    }

    /// Numerator/denominator access for rationals (tests and displays).
    pub fn as_ratio(&self) -> Option<(&BigInt, &BigInt)> {
        match &self.repr {
            Repr::Rat(r) => Some((r.numer(), r.denom())),
            Repr::Mod(_) => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Mod(r) => Some(*r),
            Repr::Rat(_) => None,
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_negative(),
            Repr::Mod(_) => false,
        }
    }

    fn check_same_field(&self, rhs: &Scalar) {
        assert_eq!(
            self.field, rhs.field,
            "scalar arithmetic across different fields ({} vs {})",
            self.field, rhs.field
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialized())
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on signed 128-bit; p < 2^31 so everything fits
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse of a nonzero residue modulo a prime");
    old_s.rem_euclid(p as i128) as u64
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        let repr = match (&self.repr, &rhs.repr, self.field) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a + b),
            (Repr::Mod(a), Repr::Mod(b), FieldSpec::PrimeField(p)) => Repr::Mod((a + b) % p),
            _ => unreachable!(),
        };
        Scalar {
            field: self.field,
            repr,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        let repr = match (&self.repr, &rhs.repr, self.field) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a - b),
            (Repr::Mod(a), Repr::Mod(b), FieldSpec::PrimeField(p)) => Repr::Mod((a + p - b) % p),
            _ => unreachable!(),
        };
        Scalar {
            field: self.field,
            repr,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        let repr = match (&self.repr, &rhs.repr, self.field) {
            (Repr::Rat(a), Repr::Rat(b), _) => Repr::Rat(a * b),
            (Repr::Mod(a), Repr::Mod(b), FieldSpec::PrimeField(p)) => {
                Repr::Mod(((*a as u128 * *b as u128) % p as u128) as u64)
            }
            _ => unreachable!(),
        };
        Scalar {
            field: self.field,
            repr,
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let repr = match (&self.repr, self.field) {
            (Repr::Rat(a), _) => Repr::Rat(-a),
            (Repr::Mod(a), FieldSpec::PrimeField(p)) => Repr::Mod((p - a) % p),
            _ => unreachable!(),
        };
        Scalar {
            field: self.field,
            repr,
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
