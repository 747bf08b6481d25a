//! Exact rational scalars.
//!
//! `Rational` is `num`'s arbitrary-precision fraction; it is always stored in
//! lowest terms with a positive denominator. This module adds the string
//! form used by the JSON interfaces: `"num"` or `"num/den"` in base 10.

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = num::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer part of a rational toward negative infinity.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Returns `Some(n)` when `r` is an integer that fits in `i64`.
pub fn as_i64(r: &Rational) -> Option<i64> {
    use num::ToPrimitive;
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

/// Accepts either a JSON string (`"3/4"`) or a JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum RawScalar {
    Str(String),
    Int(i64),
}

impl RawScalar {
    pub(crate) fn into_rational(self) -> Result<Rational> {
        match self {
            RawScalar::Str(s) => parse(&s),
            RawScalar::Int(n) => Ok(int(n)),
        }
    }
}

pub(crate) mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RawScalar::deserialize(d)?
            .into_rational()
            .map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_str_seq {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<RawScalar>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}
