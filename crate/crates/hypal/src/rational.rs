//! Exact rational scalars.
//!
//! Everything decidable in this crate is decided over `Rational`
//! (arbitrary-precision `num::BigRational`); binary64 appears only in the
//! Cesàro iteration. Rationals cross the file-format boundary as strings
//! `"p/q"` or `"p"` so that no value is ever rounded.

use num::{BigInt, BigRational, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Shorthand for `n/d` used throughout tests and fixtures.
///
/// Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p/q"` or `"p"` with optional sign, exactly.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let parse_int = |s: &str| {
        s.parse::<BigInt>()
            .map_err(|_| RationalParseError::Invalid(text.to_owned()))
    };
    match trimmed.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(trimmed)?)),
        Some((num, den)) => {
            let num = parse_int(num.trim())?;
            let den = parse_int(den.trim())?;
            if den.is_zero() {
                return Err(RationalParseError::ZeroDenominator(text.to_owned()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(value: &Rational) -> String {
    if value.denom() == &BigInt::from(1) {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Nearest binary64 value; used only for residual reporting and the
/// Cesàro iteration.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().expect("rational out of f64 range")
}
