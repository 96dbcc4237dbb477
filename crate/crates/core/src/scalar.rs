//! Exact rational scalars and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Canonical form: `p/q` with `q > 1` in lowest terms, or `p` when the value is an integer.
pub fn format(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the canonical form only. `2/4`, `3/1`, `+1` and `1/-2` are rejected so that
/// every accepted string re-serializes to itself.
pub fn parse(s: &str) -> Result<Scalar, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer = parse_integer(num).ok_or_else(|| format!("invalid scalar `{s}`"))?;
    let Some(den) = den else {
        return Ok(Scalar::from_integer(numer));
    };
    if den.starts_with('-') || den.starts_with('+') {
        return Err(format!(
            "invalid scalar `{s}`: denominator must be a bare positive integer"
        ));
    }
    let denom = parse_integer(den).ok_or_else(|| format!("invalid scalar `{s}`"))?;
    if denom.is_zero() {
        return Err(format!("invalid scalar `{s}`: zero denominator"));
    }
    let value = Scalar::new(numer.clone(), denom.clone());
    if value.denom() != &denom || value.numer() != &numer || denom.is_one() {
        return Err(format!(
            "scalar `{s}` is not in canonical form (expected `{}`)",
            format(&value)
        ));
    }
    Ok(value)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    if s.starts_with('-') && digits == "0" {
        return None;
    }
    s.parse().ok()
}

pub fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}
