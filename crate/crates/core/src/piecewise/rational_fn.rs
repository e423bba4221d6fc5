use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{BoundaryPoint, Interval, Polynomial, Rational};

/// `P(σ)/Q(σ)` with exact rational coefficients. The numerator and
/// denominator are kept as written; equality compares the represented
/// functions.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RationalFunction { num, den }
    }

    /// Integer numerator over a product of integer factors, e.g.
    /// `from_factors(&[10, -11], &[&[2, -1], &[1, -1]])` is
    /// `(10 − 11σ)/((2 − σ)(1 − σ))`.
    pub fn from_factors(num: &[i64], den_factors: &[&[i64]]) -> Self {
        let den = den_factors
            .iter()
            .fold(Polynomial::from_ints(&[1]), |acc, f| acc.mul(&Polynomial::from_ints(f)));
        Self::new(Polynomial::from_ints(num), den)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(Polynomial::constant(c), Polynomial::from_ints(&[1]))
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::new(p, Polynomial::from_ints(&[1]))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn eval_point(&self, x: &BoundaryPoint) -> Option<BoundaryPoint> {
        self.num.eval_point(x).checked_div(&self.den.eval_point(x))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.num.scale(k), self.den.clone())
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::new(self.num.mul(p), self.den.clone())
    }

    /// Common factors cancelled and coefficients scaled to coprime integers.
    pub fn reduced(&self) -> Self {
        let g = self.num.gcd(&self.den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (self.num.div_rem(&g).0, self.den.div_rem(&g).0)
        } else {
            (self.num.clone(), self.den.clone())
        };
        let denoms = num.coeffs().iter().chain(den.coeffs()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let k = Rational::from_integer(denoms);
        let (num, den) = (num.scale(&k), den.scale(&k));
        let content = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let mut k = Rational::new(BigInt::one(), content);
        if den.leading().is_some_and(|l| l.is_negative()) {
            k = -k;
        }
        Self::new(num.scale(&k), den.scale(&k))
    }

    /// Sign of the denominator on `[lo, hi]`, or `None` if it vanishes
    /// somewhere there.
    pub fn denominator_sign(&self, lo: &BoundaryPoint, hi: &BoundaryPoint) -> Option<Ordering> {
        if !super::roots::roots_in_closed(&self.den, lo, hi).is_empty() {
            return None;
        }
        let probe = if lo == hi { lo.clone() } else { BoundaryPoint::from_rational(lo.rational_between(hi)) };
        let s = self.den.eval_point(&probe).signum();
        (s != Ordering::Equal).then_some(s)
    }

    pub fn prepare(&self) -> PreparedFn {
        PreparedFn {
            num: self.num.to_intervals(),
            den: self.den.to_intervals(),
            dnum: self.num.derivative().to_intervals(),
            dden: self.den.derivative().to_intervals(),
            rf: self.clone(),
        }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Polynomial| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den == Polynomial::from_ints(&[1]) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// A rational function together with outward-rounded copies of its
/// coefficients and of its derivative's building blocks.
#[derive(Clone, Debug)]
pub struct PreparedFn {
    rf: RationalFunction,
    num: Vec<Interval>,
    den: Vec<Interval>,
    dnum: Vec<Interval>,
    dden: Vec<Interval>,
}

impl PreparedFn {
    pub fn function(&self) -> &RationalFunction {
        &self.rf
    }

    /// Natural interval extension `N(x)/D(x)`.
    pub fn value(&self, x: Interval) -> Result<Interval> {
        let n = Polynomial::eval_interval(&self.num, x);
        let d = Polynomial::eval_interval(&self.den, x);
        n.checked_div(&d).ok_or(Error::DenominatorVanishes)
    }

    /// Enclosure of the derivative `(N'D − ND')/D²` over `x`.
    pub fn derivative(&self, x: Interval) -> Result<Interval> {
        let n = Polynomial::eval_interval(&self.num, x);
        let d = Polynomial::eval_interval(&self.den, x);
        if d.contains_zero() {
            return Err(Error::DenominatorVanishes);
        }
        let dn = Polynomial::eval_interval(&self.dnum, x);
        let dd = Polynomial::eval_interval(&self.dden, x);
        (dn * d - n * dd).checked_div(&d.sqr()).ok_or(Error::DenominatorVanishes)
    }
}

/// Outward-rounded enclosure of `{ f(t) : t ∈ x }`.
///
/// Uses the endpoint hull when the derivative has constant sign on `x` and
/// otherwise the intersection of the natural and mean-value extensions.
pub fn enclose_rational_function(f: &RationalFunction, x: Interval) -> Result<Interval> {
    enclose_prepared(&f.prepare(), x)
}

pub fn enclose_prepared(p: &PreparedFn, x: Interval) -> Result<Interval> {
    let natural = p.value(x)?;
    if x.is_point() {
        return Ok(natural);
    }
    let slope = p.derivative(x)?;
    let at = |t: f64| p.value(Interval::point(t));
    if slope.lo() > 0.0 {
        let (a, b) = (at(x.lo())?, at(x.hi())?);
        return Ok(Interval::new(a.lo(), b.hi()).intersect(&natural).unwrap_or(natural));
    }
    if slope.hi() < 0.0 {
        let (a, b) = (at(x.lo())?, at(x.hi())?);
        return Ok(Interval::new(b.lo(), a.hi()).intersect(&natural).unwrap_or(natural));
    }
    let m = x.mid();
    let centred = at(m)? + slope * (x - Interval::point(m));
    Ok(centred.intersect(&natural).unwrap_or(natural))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_rational::BigRational;

    #[test]
    fn ingham_row_at_half() {
        let f = RationalFunction::from_factors(&[3], &[&[2, -1]]);
        let iv = enclose_rational_function(&f, Interval::point(0.5)).unwrap();
        assert!(iv.contains(2.0));
        assert!(iv.width() <= 2.0 * 2.0 * f64::EPSILON);
    }

    #[test]
    fn ingham_row_on_cell() {
        let f = RationalFunction::from_factors(&[3], &[&[2, -1]]);
        let iv = enclose_rational_function(&f, Interval::new(0.5, 0.7)).unwrap();
        let top = BigRational::from_float(iv.hi()).unwrap();
        assert!(iv.lo() <= 2.0 && top >= rat(30, 13));
        assert!(iv.hi() - 30.0 / 13.0 < 1e-12);
    }

    #[test]
    fn pole_inside_interval() {
        let f = RationalFunction::from_factors(&[1], &[&[1, -1]]);
        assert!(matches!(
            enclose_rational_function(&f, Interval::new(0.999, 1.001)),
            Err(Error::DenominatorVanishes)
        ));
    }

    #[test]
    fn reduction_cancels_shared_factor() {
        // (1 − σ) · (10 − 11σ)/((2 − σ)(1 − σ)) = (10 − 11σ)/(2 − σ)
        let f = RationalFunction::from_factors(&[10, -11], &[&[2, -1], &[1, -1]]);
        let g = f.mul_poly(&Polynomial::from_ints(&[1, -1])).reduced();
        assert_eq!(g.den().degree(), Some(1));
        assert_eq!(g, RationalFunction::from_factors(&[10, -11], &[&[2, -1]]));
    }
}
