//! Arbitrary-precision rationals used as the coefficient field.
//!
//! `num_rational::BigRational` already keeps values reduced with a positive
//! denominator, so this module only adds the textual `num/den` form used by
//! every serialized report and a few constructors.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    InvalidInteger(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`, reduced. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Renders `num/den`, keeping `/1` for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p` or `p/q` with an optional leading sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |t: &str| {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::InvalidInteger(t.to_string()));
        }
        BigInt::from_str(t.strip_prefix('+').unwrap_or(t))
            .map_err(|_| ParseRationalError::InvalidInteger(t.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator);
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Nearest binary64 value; saturates to ±inf or 0 on overflow/underflow.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        return v;
    }
    // Fall back to scaling when both parts overflow f64 individually.
    let bits_n = r.numer().bits() as i64;
    let bits_d = r.denom().bits() as i64;
    let shift = bits_n - bits_d;
    if shift > 1100 {
        return if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    if shift < -1100 {
        return if r.is_negative() { -0.0 } else { 0.0 };
    }
    f64::NAN
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// `base^exp` for any integer exponent. Panics on `0^negative`.
pub fn pow_i64(base: &Rational, exp: i64) -> Rational {
    let magnitude = usize::try_from(exp.unsigned_abs()).expect("exponent exceeds usize");
    let p = num_traits::pow::pow(base.clone(), magnitude);
    if exp < 0 {
        assert!(!p.is_zero(), "zero raised to a negative power");
        p.recip()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(format_rational(&ratio(-21, 81)), "-7/27");
        assert_eq!(format_rational(&int(0)), "0/1");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" +2/1 ").unwrap(), int(2));
        assert_eq!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/-").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn negative_powers_invert() {
        assert_eq!(pow_i64(&int(3), -2), ratio(1, 9));
        assert_eq!(pow_i64(&ratio(2, 3), 3), ratio(8, 27));
        assert_eq!(pow_i64(&int(7), 0), int(1));
    }

    #[test]
    fn float_conversion_of_huge_values() {
        let huge = big(BigInt::from(10).pow(400)) / big(BigInt::from(3).pow(10));
        assert_eq!(to_f64(&huge), f64::INFINITY);
        assert!((to_f64(&ratio(7, 27)) - 7.0 / 27.0).abs() < 1e-17);
    }
}
