//! Exact quadratic irrationals `p + q·√r` with rational `p`, `q`.
//!
//! Ordering is decided with rational arithmetic only: the sign of an
//! expression `a + b√r` is read off by comparing `a²` with `b²r`, and the
//! comparison of points living in two different quadratic fields squares
//! twice.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Interval, Rational};

/// An exact real `p + q·√r`. The radicand is reduced by every square of a
/// prime below 1000 and folded into `p` when it is a perfect square, so a
/// point with `q = 0` is exactly rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPoint {
    p: Rational,
    q: Rational,
    r: BigUint,
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        'outer: for n in 2u32..1000 {
            for &p in &out {
                if p * p > n {
                    break;
                }
                if n % p == 0 {
                    continue 'outer;
                }
            }
            out.push(n);
        }
        out
    })
}

/// Sign of `a + b√r` for rational `a`, `b` and `r ≥ 0`.
fn sign_surd(a: &Rational, b: &Rational, r: &BigUint) -> Ordering {
    let sa = a.cmp(&Rational::zero());
    let sb = if r.is_zero() { Ordering::Equal } else { b.cmp(&Rational::zero()) };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let a2 = a * a;
    let b2r = b * b * Rational::from_integer(BigInt::from(r.clone()));
    match a2.cmp(&b2r) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

impl BoundaryPoint {
    pub fn from_rational(p: Rational) -> Self {
        BoundaryPoint { p, q: Rational::zero(), r: BigUint::zero() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::from_ratio(0, 1)
    }

    pub fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    /// `(a + b·√r) / d` with integer data, e.g. `surd(539, -1, 42121, 460)`.
    pub fn surd(a: i64, b: i64, r: u64, d: i64) -> Self {
        let den = BigInt::from(d);
        Self::new(
            Rational::new(BigInt::from(a), den.clone()),
            Rational::new(BigInt::from(b), den),
            Rational::from_integer(BigInt::from(r)),
        )
    }

    /// `p + q·√r` for a non-negative rational radicand.
    pub fn new(p: Rational, q: Rational, r: Rational) -> Self {
        assert!(!r.is_negative(), "negative radicand");
        // √(n/d) = √(n·d)/d
        let d = r.denom().clone();
        let radicand = (r.numer() * &d).to_biguint().expect("non-negative");
        let q = q / Rational::from_integer(d);
        Self::normalize(p, q, radicand)
    }

    fn normalize(p: Rational, mut q: Rational, mut r: BigUint) -> Self {
        if q.is_zero() || r.is_zero() {
            return Self::from_rational(p);
        }
        for &prime in small_primes() {
            let sq = BigUint::from(prime * prime);
            if sq > r {
                break;
            }
            while (&r % &sq).is_zero() {
                r /= &sq;
                q *= Rational::from_integer(BigInt::from(prime));
            }
        }
        let root = r.sqrt();
        if &root * &root == r {
            return Self::from_rational(p + q * Rational::from_integer(BigInt::from(root)));
        }
        BoundaryPoint { p, q, r }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.p)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.p
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> &BigUint {
        &self.r
    }

    pub fn signum(&self) -> Ordering {
        sign_surd(&self.p, &self.q, &self.r)
    }

    fn same_field(&self, other: &Self) -> Option<BigUint> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Some(BigUint::zero()),
            (true, false) => Some(other.r.clone()),
            (false, true) => Some(self.r.clone()),
            (false, false) => (self.r == other.r).then(|| self.r.clone()),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let r = self.same_field(other)?;
        Some(Self::normalize(&self.p + &other.p, &self.q + &other.q, r))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let r = self.same_field(other)?;
        Some(Self::normalize(&self.p - &other.p, &self.q - &other.q, r))
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let r = self.same_field(other)?;
        let rr = Rational::from_integer(BigInt::from(r.clone()));
        let p = &self.p * &other.p + &self.q * &other.q * rr;
        let q = &self.p * &other.q + &self.q * &other.p;
        Some(Self::normalize(p, q, r))
    }

    /// Quotient; `None` for a zero divisor or incompatible fields.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.signum() == Ordering::Equal {
            return None;
        }
        let r = self.same_field(other)?;
        // multiply through by the conjugate of the divisor
        let rr = Rational::from_integer(BigInt::from(r.clone()));
        let norm = &other.p * &other.p - &other.q * &other.q * &rr;
        let conj = BoundaryPoint { p: other.p.clone(), q: -other.q.clone(), r: r.clone() };
        let num = self.checked_mul(&conj)?;
        Some(Self::normalize(num.p / &norm, num.q / &norm, r))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::normalize(&self.p * k, &self.q * k, self.r.clone())
    }

    pub fn add_rational(&self, k: &Rational) -> Self {
        BoundaryPoint { p: &self.p + k, q: self.q.clone(), r: self.r.clone() }
    }

    pub fn neg(&self) -> Self {
        BoundaryPoint { p: -self.p.clone(), q: -self.q.clone(), r: self.r.clone() }
    }

    /// Rational bounds `lo ≤ self ≤ hi` with `hi − lo ≤ |q|·2^(−bits)`.
    pub fn rational_bounds(&self, bits: u32) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.p.clone(), self.p.clone());
        }
        let scale = BigUint::one() << (2 * bits as usize);
        let floor = (&self.r * &scale).sqrt();
        let den = BigInt::one() << bits as usize;
        let s_lo = Rational::new(BigInt::from(floor.clone()), den.clone());
        let s_hi = Rational::new(BigInt::from(floor + 1u32), den);
        let a = &self.p + &self.q * &s_lo;
        let b = &self.p + &self.q * &s_hi;
        if a <= b { (a, b) } else { (b, a) }
    }

    /// Floating enclosure of width at most `2^(−precision)·max(1, |self|)`,
    /// or a few ulps when that is below `f64` resolution.
    pub fn enclose(&self, precision: u32) -> Interval {
        if let Some(r) = self.as_rational() {
            return Interval::from_rational(r);
        }
        let q_bits = self.q.numer().bits().saturating_sub(self.q.denom().bits()) as u32;
        let (lo, hi) = self.rational_bounds(precision + q_bits + 4);
        let l = Interval::from_rational(&lo);
        let h = Interval::from_rational(&hi);
        Interval::new(l.lo(), h.hi())
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(60).mid()
    }

    /// A rational lying strictly between `self` and `other` (`self < other`).
    pub fn rational_between(&self, other: &Self) -> Rational {
        assert!(self < other, "rational_between needs an increasing pair");
        let two = Rational::from_integer(BigInt::from(2));
        let mut bits = 16;
        loop {
            let (_, a_hi) = self.rational_bounds(bits);
            let (b_lo, _) = other.rational_bounds(bits);
            if a_hi < b_lo {
                let m = (a_hi + b_lo) / &two;
                // prefer short representations for readability of derived breakpoints
                return simplest_between(&m, self, other).unwrap_or(m);
            }
            bits *= 2;
        }
    }
}

/// Try a few low-denominator rationals near `m` that still fall strictly
/// inside `(lo, hi)`.
fn simplest_between(m: &Rational, lo: &BoundaryPoint, hi: &BoundaryPoint) -> Option<Rational> {
    for den in [2i64, 4, 10, 100, 1000, 10_000, 100_000, 1_000_000] {
        let d = BigInt::from(den);
        let n = (m * Rational::from_integer(d.clone())).round().to_integer();
        let cand = Rational::new(n, d);
        let pt = BoundaryPoint::from_rational(cand.clone());
        if &pt > lo && &pt < hi {
            return Some(cand);
        }
    }
    None
}

/// Exact comparison of two quadratic irrationals, possibly from different
/// fields.
pub fn compare_boundary(a: &BoundaryPoint, b: &BoundaryPoint) -> Ordering {
    if let Some(d) = a.checked_sub(b) {
        return d.signum();
    }
    // A + B√r1 + C√r2 with r1 ≠ r2, both irrational
    let big_a = &a.p - &b.p;
    let big_b = &a.q;
    let big_c = -b.q.clone();
    let r1 = Rational::from_integer(BigInt::from(a.r.clone()));
    let r2 = Rational::from_integer(BigInt::from(b.r.clone()));
    let zero = Rational::zero();
    // sign of W = B√r1 + C√r2
    let sign_w = {
        let sb = big_b.cmp(&zero);
        let sc = big_c.cmp(&zero);
        if sb == sc {
            sb
        } else {
            match (big_b * big_b * &r1).cmp(&(&big_c * &big_c * &r2)) {
                Ordering::Greater => sb,
                Ordering::Less => sc,
                Ordering::Equal => Ordering::Equal,
            }
        }
    };
    let sign_a = big_a.cmp(&zero);
    if sign_w == Ordering::Equal {
        return sign_a;
    }
    if sign_a == Ordering::Equal || sign_a == sign_w {
        return sign_w;
    }
    // compare A² with W² = B²r1 + C²r2 + 2BC√(r1 r2)
    let x = &big_a * &big_a - big_b * big_b * &r1 - &big_c * &big_c * &r2;
    let y = -(Rational::from_integer(BigInt::from(2)) * big_b * &big_c);
    let prod = &a.r * &b.r;
    match sign_surd(&x, &y, &prod) {
        Ordering::Greater => sign_a,
        Ordering::Less => sign_w,
        Ordering::Equal => Ordering::Equal,
    }
}

impl PartialOrd for BoundaryPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoundaryPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_boundary(self, other)
    }
}

impl From<Rational> for BoundaryPoint {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return fmt_rational(&self.p, f);
        }
        let d = self.p.denom().lcm(self.q.denom());
        let dr = Rational::from_integer(d.clone());
        let a = (&self.p * &dr).to_integer();
        let b = (&self.q * &dr).to_integer();
        let surd = match b.to_i64() {
            Some(1) => format!("sqrt({})", self.r),
            Some(-1) => format!("-sqrt({})", self.r),
            _ => format!("{}*sqrt({})", b, self.r),
        };
        let body = if a.is_zero() {
            surd
        } else if b.sign() == Sign::Minus {
            format!("{} - {}", a, surd.trim_start_matches('-'))
        } else {
            format!("{} + {}", a, surd)
        };
        if d.is_one() {
            write!(f, "{body}")
        } else if a.is_zero() {
            write!(f, "{body}/{d}")
        } else {
            write!(f, "({body})/{d}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_breakpoint_ordering() {
        let a = BoundaryPoint::from_ratio(19, 25);
        let b = BoundaryPoint::surd(539, -1, 42121, 460);
        assert_eq!(compare_boundary(&a, &b), Ordering::Greater);
        let half = BoundaryPoint::from_ratio(1, 2);
        assert_eq!(compare_boundary(&half, &BoundaryPoint::from_ratio(2, 4)), Ordering::Equal);
        let c = BoundaryPoint::surd(5831, 1, 60001, 8240);
        assert_eq!(compare_boundary(&c, &BoundaryPoint::from_ratio(42, 55)), Ordering::Less);
    }

    #[test]
    fn perfect_squares_fold_to_rationals() {
        let p = BoundaryPoint::surd(1, 3, 49, 2);
        assert_eq!(p, BoundaryPoint::from_ratio(11, 1));
        let q = BoundaryPoint::surd(0, 1, 12, 1);
        assert_eq!(q.radicand(), &BigUint::from(3u32));
        assert_eq!(q.surd_coefficient(), &Rational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn mixed_fields_compare() {
        // √2 + √3 vs √10: 5 + 2√6 ≈ 9.899 < 10
        let s2 = BoundaryPoint::surd(0, 1, 2, 1);
        let s3 = BoundaryPoint::surd(0, 1, 3, 1);
        let s10 = BoundaryPoint::surd(0, 1, 10, 1);
        // compare √2 against √10 − √3 (two different fields on each side)
        let lhs = s2.clone();
        let rhs = s10.checked_sub(&s3);
        assert!(rhs.is_none());
        assert_eq!(compare_boundary(&s2, &s3), Ordering::Less);
        assert_eq!(compare_boundary(&s10, &s3.checked_add(&BoundaryPoint::from_ratio(1, 1)).unwrap()), Ordering::Greater);
        // √2 ≈ 1.41421 against (1 + √3)/2 ≈ 1.36603
        assert_eq!(compare_boundary(&lhs, &BoundaryPoint::surd(1, 1, 3, 2)), Ordering::Greater);
        assert_eq!(compare_boundary(&BoundaryPoint::surd(1, 1, 3, 2), &lhs), Ordering::Less);
    }

    #[test]
    fn field_arithmetic() {
        let x = BoundaryPoint::surd(1, 1, 2, 1);
        let y = BoundaryPoint::surd(1, -1, 2, 1);
        assert_eq!(x.checked_mul(&y).unwrap(), BoundaryPoint::from_ratio(-1, 1));
        let q = x.checked_div(&y).unwrap();
        // (1+√2)/(1−√2) = −(3 + 2√2)
        assert_eq!(q, BoundaryPoint::surd(-3, -2, 2, 1));
    }

    #[test]
    fn enclosures_of_table_surds() {
        let b = BoundaryPoint::surd(1273, -1, 128689, 1184);
        let iv = b.enclose(60);
        // 50-digit reference: 0.77218539623148356269808954169781301090697811061441
        assert!(iv.contains(0.772_185_396_231_483_6));
        assert!(iv.width() <= 1e-9);
        let a = BoundaryPoint::surd(539, -1, 42121, 460).enclose(60);
        assert!(a.contains(0.725_578_233_096_390_1));
        assert_eq!(b.to_string(), "(1273 - sqrt(128689))/1184");
    }

    #[test]
    fn rational_between_is_strict() {
        let a = BoundaryPoint::surd(539, -1, 42121, 460);
        let b = BoundaryPoint::from_ratio(165, 226);
        let m = BoundaryPoint::from_rational(a.rational_between(&b));
        assert!(a < m && m < b);
    }
}
