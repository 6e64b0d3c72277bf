//! Exact rational parsing and formatting.
//!
//! Every quantity in a game file is an exact rational. Accepted literal
//! forms: an integer (`3`, `-7`), a fraction (`p/q`), or a finite decimal
//! (`0.25`, `2.5e-1`). All three parse without rounding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::GameError;

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational from its textual form: integer, `p/q`, or finite decimal.
pub fn parse_rational(text: &str) -> Result<Rational, GameError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(GameError::InvalidRational(text.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let p = parse_bigint(num.trim(), text)?;
        let q = parse_bigint(den.trim(), text)?;
        if q.is_zero() {
            return Err(GameError::InvalidRational(text.to_string()));
        }
        return Ok(Rational::new(p, q));
    }
    if s.contains(['.', 'e', 'E']) {
        return parse_decimal(s, text);
    }
    Ok(Rational::from_integer(parse_bigint(s, text)?))
}

fn parse_bigint(s: &str, original: &str) -> Result<BigInt, GameError> {
    BigInt::from_str(s).map_err(|_| GameError::InvalidRational(original.to_string()))
}

/// Exact decimal parse: mantissa digits scaled by a power of ten.
fn parse_decimal(s: &str, original: &str) -> Result<Rational, GameError> {
    let bad = || GameError::InvalidRational(original.to_string());
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, i64::from_str(e).map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    // A bare sign with no digits is rejected by BigInt's parser.
    let unscaled = parse_bigint(&digits, original)?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(unscaled * ten.pow(scale as u32))
    } else {
        Rational::new(unscaled, ten.pow((-scale) as u32))
    })
}

/// Format a rational in the game-file syntax: plain integer or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
