//! Outward-rounded interval arithmetic on `f64`.
//!
//! Every operation computes the round-to-nearest result, recovers the sign
//! of its rounding error with an error-free transformation, and steps one
//! ulp outward on the side where the exact result may lie. Exact results
//! are not widened.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::Rational;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Tightest representable enclosure of an exact rational.
    pub fn from_rational(r: &Rational) -> Self {
        let approx = r.to_f64().unwrap_or(f64::NAN);
        if !approx.is_finite() {
            // Magnitudes beyond f64 range never occur for the quantities handled here.
            return Interval::new(f64::NEG_INFINITY, f64::INFINITY);
        }
        match BigRational::from_float(approx) {
            Some(back) if &back == r => Interval::point(approx),
            _ => {
                let mut lo = approx;
                let mut hi = approx;
                while BigRational::from_float(lo).is_none_or(|l| &l > r) {
                    lo = lo.next_down();
                }
                while BigRational::from_float(hi).is_none_or(|h| &h < r) {
                    hi = hi.next_up();
                }
                Interval::new(lo, hi)
            }
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Enclosure of `{ max(a, b) }`.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Enclosure of `{ min(a, b) }`.
    pub fn min(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn sqr(&self) -> Interval {
        let m = self.lo.abs().min(self.hi.abs());
        let big = self.lo.abs().max(self.hi.abs());
        let lo = if self.contains_zero() { 0.0 } else { mul_down(m, m).max(0.0) };
        Interval { lo, hi: mul_up(big, big) }
    }

    /// Quotient, or `None` when the divisor contains zero.
    pub fn checked_div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let pairs = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)];
        let lo = pairs.iter().map(|&(a, b)| div_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(a, b)| div_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Some(Interval { lo, hi })
    }

    pub fn mul_f64(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }
}

// Error-free transformations are only trusted well inside the normal
// range; elsewhere fall back to an unconditional one-ulp step.
fn safe(x: f64) -> bool {
    let a = x.abs();
    a == 0.0 || (1e-280..1e280).contains(&a)
}

/// Sign of `(a + b) − fl(a + b)`.
fn add_error(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

fn split(a: f64) -> (f64, f64) {
    let c = 134217729.0 * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

/// Exact error `a·b − fl(a·b)` (Dekker).
fn mul_error(a: f64, b: f64, p: f64) -> f64 {
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    ((ah * bh - p) + ah * bl + al * bh) + al * bl
}

fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() || !(safe(a) && safe(b) && safe(s)) {
        return s.next_down();
    }
    if add_error(a, b, s) < 0.0 { s.next_down() } else { s }
}

fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() || !(safe(a) && safe(b) && safe(s)) {
        return s.next_up();
    }
    if add_error(a, b, s) > 0.0 { s.next_up() } else { s }
}

fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() || !(safe(a) && safe(b) && safe(p)) {
        return p.next_down();
    }
    if mul_error(a, b, p) < 0.0 { p.next_down() } else { p }
}

fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() || !(safe(a) && safe(b) && safe(p)) {
        return p.next_up();
    }
    if mul_error(a, b, p) > 0.0 { p.next_up() } else { p }
}

/// Sign of `a/b − fl(a/b)`, from the exact residual `a − q·b`.
fn div_error_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if !(safe(a) && safe(b) && safe(q)) || q == 0.0 {
        return None;
    }
    let p = q * b;
    let e = mul_error(q, b, p);
    // a − p is exact by Sterbenz since p is within one rounding of a
    let r = (a - p) - e;
    Some(if r == 0.0 { 0.0 } else { r.signum() * b.signum() })
}

fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if a == 0.0 {
        return 0.0;
    }
    match div_error_sign(a, b, q) {
        Some(s) if s >= 0.0 => q,
        _ => q.next_down(),
    }
}

fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if a == 0.0 {
        return 0.0;
    }
    match div_error_sign(a, b, q) {
        Some(s) if s <= 0.0 => q,
        _ => q.next_up(),
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, -rhs.hi), hi: add_up(self.hi, -rhs.lo) }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_point() && self.lo.is_zero() || rhs.is_point() && rhs.lo.is_zero() {
            return Interval::point(0.0);
        }
        let pairs = [(self.lo, rhs.lo), (self.lo, rhs.hi), (self.hi, rhs.lo), (self.hi, rhs.hi)];
        let lo = pairs.iter().map(|&(a, b)| mul_down(a, b)).fold(f64::INFINITY, f64::min);
        let hi = pairs.iter().map(|&(a, b)| mul_up(a, b)).fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dyadic_rationals_are_points() {
        assert!(Interval::from_rational(&q(1, 2)).is_point());
        assert!(Interval::from_rational(&q(-3, 8)).is_point());
    }

    #[test]
    fn non_dyadic_rationals_are_enclosed() {
        for (n, d) in [(7, 10), (30, 13), (235, 39), (-1, 3), (2211487, 2274732)] {
            let r = q(n, d);
            let iv = Interval::from_rational(&r);
            assert!(BigRational::from_float(iv.lo()).unwrap() < r);
            assert!(BigRational::from_float(iv.hi()).unwrap() > r);
            assert!(iv.width() <= 2.0 * f64::EPSILON * iv.hi().abs().max(1.0));
        }
    }

    #[test]
    fn arithmetic_contains_exact_result() {
        let a = Interval::from_rational(&q(1, 3));
        let b = Interval::from_rational(&q(2, 7));
        let exact = q(1, 3) * q(2, 7) + q(1, 3) - q(2, 7);
        let got = a * b + a - b;
        assert!(BigRational::from_float(got.lo()).unwrap() <= exact);
        assert!(BigRational::from_float(got.hi()).unwrap() >= exact);
        assert!(a.checked_div(&Interval::new(-1.0, 1.0)).is_none());
    }
}
