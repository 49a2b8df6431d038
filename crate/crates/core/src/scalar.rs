//! Exact rational scalars.
//!
//! Every moment in this crate is an [`ExactScalar`], a big rational kept in
//! lowest terms with a positive denominator. Values cross text boundaries as
//! `"p/q"` or plain integer strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ExactScalar = BigRational;

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> ExactScalar {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"`, `"p"`, optionally signed and padded with whitespace.
pub fn parse_exact(s: &str) -> Result<ExactScalar> {
    let t = s.trim();
    let bad = || Error::Parse(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let numer: BigInt = n.parse().map_err(|_| bad())?;
    let denom: BigInt = d.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_exact(x: &ExactScalar) -> String {
    x.to_string()
}

pub fn to_f64(x: &ExactScalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn pow(x: &ExactScalar, e: usize) -> ExactScalar {
    num_traits::pow(x.clone(), e)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(2m - 1)!!`, with the empty product for `m = 0`.
pub fn double_factorial_odd(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

/// Exact square root when `x` is the square of a rational.
pub fn exact_sqrt(x: &ExactScalar) -> Option<ExactScalar> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// `#[serde(with = ...)]` adapter storing a scalar as its `p/q` string.
pub mod serde_string {
    use super::{format_exact, parse_exact, ExactScalar};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &ExactScalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_exact(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactScalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_exact(&s).map_err(D::Error::custom)
    }
}
