//! Arbitrary-precision rational scalars and their textual form.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, Signed, Zero};

pub type Rational = Ratio<BigInt>;

/// Shorthand for a rational from machine integers.
pub fn rat(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Ratio::from_integer(BigInt::from(p))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses "p/q" or a bare integer "p". Whitespace around either part is accepted.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num_s, den_s) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let p: BigInt = num_s
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    let q: BigInt = den_s
        .parse()
        .map_err(|_| ParseRationalError::Malformed(s.to_string()))?;
    if q.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Ratio::new(p, q))
}

/// Renders in lowest terms, omitting the denominator when it is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
