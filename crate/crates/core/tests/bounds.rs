use std::cmp::Ordering;

use mubound::exact::{compare_boundary, parse_exact, rat, BoundaryPoint};
use mubound::mu::{feasible_sigma_region, gap_exponent, mu4, mu_curve, mu_upper, MuOptions};
use mubound::piecewise::{feasible_region, ExtReal};
use mubound::tables::{a_table, HypothesisMode};

#[test]
fn l4_at_the_half_line_is_linear_in_theta() {
    let half = BoundaryPoint::from_ratio(1, 2);
    for k in 1..20 {
        let theta = rat(k, 30);
        let expected = rat(2, 1) - rat(3, 1) * &theta;
        let v = mu4(&half, &theta, HypothesisMode::Unconditional).unwrap();
        assert_eq!(v, ExtReal::Finite(BoundaryPoint::from_rational(expected)), "θ = {theta}");
    }
}

#[test]
fn conditional_values() {
    let opts = MuOptions::default();
    let rh = mu_upper(&rat(3, 10), HypothesisMode::Rh, &opts).unwrap();
    assert!((rh.upper - 0.7).abs() <= 1e-9);
    assert!((rh.gap_exponent() - 0.4).abs() <= 1e-9);
    let lh = mu_upper(&rat(2, 5), HypothesisMode::Lh, &opts).unwrap();
    assert!((lh.upper - 0.8).abs() <= 1e-6, "{}", lh.upper);
}

#[test]
fn gap_near_seventeen_thirtieths() {
    let g = gap_exponent(&rat(17, 30), HypothesisMode::Unconditional, &MuOptions::default()).unwrap();
    assert!((g - 1.0 / 60.0).abs() <= 1e-9);
}

#[test]
fn short_curve_is_finite_and_nonincreasing() {
    let pts = mu_curve(&rat(1, 2), &rat(11, 20), 5, HypothesisMode::Unconditional, &MuOptions::default()).unwrap();
    assert_eq!(pts.len(), 6);
    for w in pts.windows(2) {
        assert!(w[0].mu_upper.is_finite() && w[1].mu_upper.is_finite());
        assert!(w[1].mu_upper <= w[0].mu_upper + 1e-9);
    }
}

#[test]
fn region_where_a_reaches_fifteen_thirteenths() {
    // A ≥ 1/(1 − θ) = 15/13 at θ = 2/15
    let region = feasible_sigma_region(&rat(2, 15), HypothesisMode::Unconditional, 64).unwrap();
    assert_eq!(region.len(), 1);
    let top = region[0].hi.to_f64();
    assert!(region[0].lo.to_f64() <= 0.5);
    assert!(top > 0.9419 && top < 0.946, "{top}");

    let all = feasible_region(&a_table(HypothesisMode::Unconditional), &rat(0, 1));
    assert_eq!(all.len(), 1);
    assert_eq!(all[0].lo, BoundaryPoint::from_ratio(0, 1));
    assert_eq!(all[0].hi, BoundaryPoint::from_ratio(8319, 8320));
    assert!(all[0].right_open);
}

#[test]
fn surd_breakpoints_against_rationals() {
    let left = BoundaryPoint::surd(5831, 1, 60001, 8240);
    assert_eq!(compare_boundary(&left, &BoundaryPoint::from_ratio(42, 55)), Ordering::Less);
    assert_eq!(compare_boundary(&BoundaryPoint::from_ratio(19, 25), &left), Ordering::Greater);
    let x = (5831.0 + 60001f64.sqrt()) / 8240.0;
    assert!((left.to_f64() - x).abs() < 1e-15);
}

#[test]
fn parsing() {
    assert_eq!(parse_exact("0.76").unwrap(), rat(19, 25));
    assert!(parse_exact("1/0").is_err());
}
