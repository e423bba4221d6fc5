//! Exact rational and quadratic-irrational arithmetic, and the
//! outward-rounded intervals that back the certified optimizer.

mod boundary;
mod interval;
mod poly;

pub use boundary::{compare_boundary, BoundaryPoint};
pub use interval::Interval;
pub use poly::Polynomial;

use num_bigint::BigInt;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or a finite decimal such as `"0.76"` or `"-1.5e-3"` into
/// an exact rational.
pub fn parse_exact(text: &str) -> Result<Rational> {
    let err = |msg: &str| Error::ParseExact { text: text.to_string(), msg: msg.to_string() };
    let t = text.trim();
    if t.is_empty() {
        return Err(err("empty input"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str_radix(n.trim(), 10).map_err(|_| err("bad numerator"))?;
        let d = BigInt::from_str_radix(d.trim(), 10).map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err("no digits"));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err("not a decimal number"));
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str_radix(&digits, 10).map_err(|_| err("bad digits"))?);
    let shift = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}
