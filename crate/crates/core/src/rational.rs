//! Exact rational scalars and their textual form.
//!
//! Every distance, bound and scale factor in the crate is a [`Rational`]
//! (an arbitrary-precision fraction kept in lowest terms with a positive
//! denominator). The textual form is `p/q`, or a bare integer when `q = 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}: expected `p/q` or an integer")]
pub struct ParseRationalError(pub String);

/// Builds `n/d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `p/q` or an integer. Whitespace is not accepted, the denominator
/// must be positive, and the value is reduced.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (parse_int(n).ok_or_else(err)?, parse_int(d).ok_or_else(err)?),
        None => (parse_int(text).ok_or_else(err)?, BigInt::one()),
    };
    if !den.is_positive() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text).ok()
}

/// Canonical rendering: bare integer when the denominator is 1, else `p/q`.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse("-3/6").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "1/-2", "a", "1.5", " 1", "1/", "/2", "--1", "+1"] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format(&ratio(4, 2)), "2");
        assert_eq!(format(&ratio(-9, 6)), "-3/2");
        assert_eq!(format(&zero()), "0");
    }

    proptest! {
        #[test]
        fn format_parse_roundtrip(n in -10_000i64..10_000, d in 1i64..500) {
            let r = ratio(n, d);
            prop_assert_eq!(parse(&format(&r)).unwrap(), r);
        }
    }
}
