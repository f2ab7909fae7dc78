//! Exact rational scalars.
//!
//! All coefficients in the crate are arbitrary-precision rationals kept in
//! canonical reduced form (positive denominator). This module is a thin layer
//! over `num`, plus parsing/formatting of the `"p"` / `"p/q"` text form used
//! by algebra files and the CLI.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number in canonical reduced form.
pub type Rat = BigRational;

/// Shorthand for `p/q` from machine integers. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer rational.
pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Exact factorial as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

/// Exact binomial coefficient `n choose k` as a rational.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k as u64 {
        acc *= BigInt::from(n as u64 - i);
    }
    let mut den = BigInt::one();
    for i in 1..=k as u64 {
        den *= BigInt::from(i);
    }
    Rat::new(acc, den)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    BadInteger(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"` with optional sign on the numerator.
pub fn parse_rat(text: &str) -> Result<Rat, RatParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| RatParseError::BadInteger(num_str.to_string()))?;
    let den: BigInt = match den_str {
        Some(d) => d
            .parse()
            .map_err(|_| RatParseError::BadInteger(d.to_string()))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(num, den))
}

/// Renders a rational as `"p"` or `"p/q"`.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// Formats a coefficient in front of a symbolic monomial, e.g. `3*`, `-1/2*`,
/// or a bare sign when the coefficient is `±1` and a monomial follows.
pub(crate) fn fmt_term(coeff: &Rat, monomial: &str, first: bool) -> String {
    let mag = coeff.abs();
    let sign = if coeff.is_negative() {
        if first {
            "-"
        } else {
            " - "
        }
    } else if first {
        ""
    } else {
        " + "
    };
    if monomial.is_empty() {
        format!("{sign}{mag}")
    } else if mag.is_one() {
        format!("{sign}{monomial}")
    } else {
        format!("{sign}{mag}*{monomial}")
    }
}
