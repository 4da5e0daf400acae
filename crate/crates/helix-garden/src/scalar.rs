//! Exact rational scalars and their text form.
//!
//! Every coordinate in this crate is a [`Scalar`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. The text form
//! is `"p/q"`, with `/q` omitted when the denominator is one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number. `BigRational` guarantees the canonical form we
/// rely on: reduced fraction, positive denominator.
pub type Scalar = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarParseError {
    #[error("empty scalar literal")]
    Empty,
    #[error("invalid integer in scalar literal: {0}")]
    BadInteger(String),
    #[error("zero denominator in scalar literal")]
    ZeroDenominator,
}

/// Parse `"p"` or `"p/q"` into a scalar.
pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    let (num_s, den_s) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: BigInt = num_s
        .trim()
        .parse()
        .map_err(|_| ScalarParseError::BadInteger(num_s.to_string()))?;
    let den: BigInt = match den_s {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| ScalarParseError::BadInteger(d.to_string()))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ScalarParseError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

/// Render a scalar as `"p/q"`, omitting `/q` when the denominator is one.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Convenience constructor for small rationals.
pub fn rational(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for integers.
pub fn integer(n: i64) -> Scalar {
    BigRational::from(BigInt::from(n))
}

/// Sign of a scalar as -1, 0, or 1.
pub fn sign(s: &Scalar) -> i8 {
    if s.is_zero() {
        0
    } else if s.is_positive() {
        1
    } else {
        -1
    }
}

/// Lossy conversion for rendering only; never used in predicates.
pub fn to_f64(s: &Scalar) -> f64 {
    let num = s.numer();
    let den = s.denom();
    // Scale down through division of floats of the leading digits.
    let nf = num.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = den.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["0", "5", "-3", "1/2", "-7/3", "22/7"] {
            let s = parse_scalar(text).unwrap();
            assert_eq!(format_scalar(&s), text);
        }
    }

    #[test]
    fn parse_reduces_to_canonical_form() {
        assert_eq!(format_scalar(&parse_scalar("4/8").unwrap()), "1/2");
        assert_eq!(format_scalar(&parse_scalar("3/-6").unwrap()), "-1/2");
        assert_eq!(format_scalar(&parse_scalar("6/3").unwrap()), "2");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("a/2").is_err());
        assert!(parse_scalar("1.5").is_err());
    }
}
