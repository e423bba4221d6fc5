//! Real roots of low-degree polynomials inside breakpoint intervals.
//!
//! Degrees up to two are solved in closed form, giving exact
//! [`BoundaryPoint`] roots. Higher degrees fall back to Sturm-sequence
//! isolation with rational brackets.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{BoundaryPoint, Polynomial, Rational};

/// Width of isolating brackets for roots that are not quadratic irrationals.
pub fn bracket_width() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(1_000_000_000_000i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(BoundaryPoint),
    /// A single root known to lie in the closed rational interval.
    Bracket(Rational, Rational),
}

impl Root {
    fn lo(&self) -> BoundaryPoint {
        match self {
            Root::Exact(p) => p.clone(),
            Root::Bracket(a, _) => BoundaryPoint::from_rational(a.clone()),
        }
    }

    fn hi(&self) -> BoundaryPoint {
        match self {
            Root::Exact(p) => p.clone(),
            Root::Bracket(_, b) => BoundaryPoint::from_rational(b.clone()),
        }
    }
}

/// Closed-form real roots, ascending, for polynomials of degree 1 or 2.
pub fn quadratic_roots(p: &Polynomial) -> Option<Vec<BoundaryPoint>> {
    let c = p.coeffs();
    match p.degree() {
        Some(1) => Some(vec![BoundaryPoint::from_rational(-&c[0] / &c[1])]),
        Some(2) => {
            let (a, b, cc) = (&c[2], &c[1], &c[0]);
            let four = Rational::from_integer(BigInt::from(4));
            let disc = b * b - four * a * cc;
            if disc < Rational::zero() {
                return Some(Vec::new());
            }
            let two_a = a * Rational::from_integer(BigInt::from(2));
            let centre = -b / &two_a;
            if disc.is_zero() {
                return Some(vec![BoundaryPoint::from_rational(centre)]);
            }
            let half = Rational::one() / &two_a;
            let mut roots = vec![
                BoundaryPoint::new(centre.clone(), half.clone(), disc.clone()),
                BoundaryPoint::new(centre, -half, disc),
            ];
            roots.sort();
            Some(roots)
        }
        _ => None,
    }
}

fn all_roots_near(p: &Polynomial, lo: &BoundaryPoint, hi: &BoundaryPoint) -> Vec<Root> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    if let Some(roots) = quadratic_roots(p) {
        return roots.into_iter().map(Root::Exact).collect();
    }
    let margin = Rational::new(BigInt::one(), BigInt::one() << 40);
    let a = lo.rational_bounds(64).0 - &margin;
    let b = hi.rational_bounds(64).1 + margin;
    p.isolate_roots(&a, &b, &bracket_width())
        .into_iter()
        .map(|(l, r)| if l == r { Root::Exact(BoundaryPoint::from_rational(l)) } else { Root::Bracket(l, r) })
        .collect()
}

/// Roots in the closed interval `[lo, hi]`; brackets that merely overlap
/// it are kept.
pub fn roots_in_closed(p: &Polynomial, lo: &BoundaryPoint, hi: &BoundaryPoint) -> Vec<Root> {
    all_roots_near(p, lo, hi).into_iter().filter(|r| &r.hi() >= lo && &r.lo() <= hi).collect()
}

/// Roots in the open interval `(lo, hi)`; brackets that overlap it are kept
/// and clipped to it.
pub fn roots_strictly_inside(p: &Polynomial, lo: &BoundaryPoint, hi: &BoundaryPoint) -> Vec<Root> {
    all_roots_near(p, lo, hi)
        .into_iter()
        .filter(|r| &r.hi() > lo && &r.lo() < hi)
        .map(|r| match r {
            Root::Bracket(a, b) => {
                let a_pt = BoundaryPoint::from_rational(a.clone());
                let b_pt = BoundaryPoint::from_rational(b.clone());
                let a = if &a_pt <= lo { lo.rational_between(hi) } else { a };
                let b = if &b_pt >= hi { lo.rational_between(hi) } else { b };
                if a < b { Root::Bracket(a, b) } else { Root::Exact(BoundaryPoint::from_rational(a)) }
            }
            exact => exact,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn linear_and_quadratic() {
        let r = quadratic_roots(&Polynomial::from_ints(&[-7, 10])).unwrap();
        assert_eq!(r, vec![BoundaryPoint::from_ratio(7, 10)]);
        // 230 s^2 - 539 s + 270 has roots (539 ± √42121)/460
        let r = quadratic_roots(&Polynomial::from_ints(&[270, -539, 230])).unwrap();
        assert_eq!(r[0], BoundaryPoint::surd(539, -1, 42121, 460));
        assert_eq!(r[1], BoundaryPoint::surd(539, 1, 42121, 460));
        assert!(quadratic_roots(&Polynomial::from_ints(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn strict_filter_excludes_endpoints() {
        let p = Polynomial::from_ints(&[-7, 10]);
        let lo = BoundaryPoint::from_ratio(7, 10);
        let hi = BoundaryPoint::from_ratio(19, 25);
        assert!(roots_strictly_inside(&p, &lo, &hi).is_empty());
        assert_eq!(roots_in_closed(&p, &lo, &hi).len(), 1);
    }

    #[test]
    fn cubic_falls_back_to_brackets() {
        // s^3 - 2 has the single real root 2^(1/3)
        let p = Polynomial::from_ints(&[-2, 0, 0, 1]);
        let roots = roots_in_closed(&p, &BoundaryPoint::from_ratio(1, 1), &BoundaryPoint::from_ratio(2, 1));
        assert_eq!(roots.len(), 1);
        match &roots[0] {
            Root::Bracket(a, b) => {
                assert!(b - a <= bracket_width());
                assert!(*a < rat(12599211, 10_000_000) && *b > rat(12599210, 10_000_000));
            }
            other => panic!("expected bracket, got {other:?}"),
        }
    }
}
