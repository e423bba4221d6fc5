//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{BoundaryPoint, Interval, Rational};

/// Coefficients in ascending order of degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `s`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Exact evaluation at a quadratic irrational (stays in its field).
    pub fn eval_point(&self, x: &BoundaryPoint) -> BoundaryPoint {
        self.coeffs.iter().rev().fold(BoundaryPoint::zero(), |acc, c| {
            acc.checked_mul(x).expect("same field").add_rational(c)
        })
    }

    pub fn eval_interval(coeffs: &[Interval], x: Interval) -> Interval {
        coeffs.iter().rev().fold(Interval::point(0.0), |acc, &c| acc * x + c)
    }

    pub fn to_intervals(&self) -> Vec<Interval> {
        self.coeffs.iter().map(Interval::from_rational).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &f * c;
            }
            quot[k] = f;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Number of sign changes of the Sturm sequence at `x`.
    fn sturm_variations(chain: &[Polynomial], x: &Rational) -> usize {
        let signs: Vec<i32> = chain
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn sturm_chain(&self) -> Vec<Polynomial> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(r.neg());
        }
        chain.pop();
        chain
    }

    /// Isolate the distinct real roots in the half-open interval `(lo, hi]`
    /// to brackets of width at most `width`. Exact rational roots found
    /// during bisection are returned as degenerate brackets.
    pub fn isolate_roots(&self, lo: &Rational, hi: &Rational, width: &Rational) -> Vec<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sqfree = self.div_rem(&self.gcd(&self.derivative())).0;
        let chain = sqfree.sturm_chain();
        let count = |a: &Rational, b: &Rational| {
            Self::sturm_variations(&chain, a) - Self::sturm_variations(&chain, b)
        };
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        let two = Rational::from_integer(BigInt::from(2));
        while let Some((a, b)) = stack.pop() {
            let n = count(&a, &b);
            if n == 0 {
                continue;
            }
            if sqfree.eval(&b).is_zero() {
                out.push((b.clone(), b.clone()));
                if n > 1 {
                    let m = (&a + &b) / &two;
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                }
                continue;
            }
            if n == 1 && &b - &a <= *width {
                out.push((a, b));
                continue;
            }
            let m = (&a + &b) / &two;
            stack.push((m.clone(), b));
            stack.push((a, m));
        }
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag_text = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match k {
                0 => write!(f, "{mag_text}")?,
                _ => {
                    if !mag.is_one() {
                        if mag.is_integer() {
                            write!(f, "{mag_text}")?;
                        } else {
                            write!(f, "({mag_text})")?;
                        }
                    }
                    if k == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gcd_cancels_common_linear_factor() {
        // (1 - s)(2 - s) and (1 - s)(3 + 5s)
        let a = Polynomial::from_ints(&[1, -1]).mul(&Polynomial::from_ints(&[2, -1]));
        let b = Polynomial::from_ints(&[1, -1]).mul(&Polynomial::from_ints(&[3, 5]));
        assert_eq!(a.gcd(&b), Polynomial::from_ints(&[-1, 1]));
    }

    #[test]
    fn division_identity() {
        let a = Polynomial::from_ints(&[5, -3, 0, 2, 7]);
        let d = Polynomial::from_ints(&[1, 2, 3]);
        let (quot, rem) = a.div_rem(&d);
        assert_eq!(quot.mul(&d).add(&rem), a);
        assert!(rem.degree().unwrap() < 2);
    }

    #[test]
    fn sturm_isolation_of_quartic() {
        // (s - 1/3)(s - 1/2)(s^2 - 2): roots 1/3, 1/2 and ±√2
        let p = Polynomial::new(vec![-q(1, 3), q(1, 1)])
            .mul(&Polynomial::new(vec![-q(1, 2), q(1, 1)]))
            .mul(&Polynomial::from_ints(&[-2, 0, 1]));
        let roots = p.isolate_roots(&q(0, 1), &q(2, 1), &q(1, 1_000_000));
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1], (q(1, 2), q(1, 2)));
        let (a, b) = &roots[2];
        assert!(*a < q(1414214, 1_000_000) && *b > q(1414213, 1_000_000));
    }

    #[test]
    fn display_uses_s() {
        assert_eq!(Polynomial::from_ints(&[10, -11]).to_string(), "10 - 11s");
        assert_eq!(Polynomial::from_ints(&[0, 0, 1]).to_string(), "s^2");
    }
}
