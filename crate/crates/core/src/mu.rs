//! Upper bounds for the exceptional-set exponent μ(θ).
//!
//! For `c = 1/(1 − θ)` the bound is the supremum over `{σ : Ã(σ) ≥ c}` of
//! `min(μ₂, μ₄)` (or `μ₂` alone), where
//! `μ₂ = (1 − θ)(1 − σ)Ã(σ) + 2σ − 1` and
//! `μ₄ = (1 − θ)(1 − σ)Ã*(σ) + 4σ − 3`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, BoundaryPoint, Interval, Polynomial, Rational};
use crate::piecewise::{
    certified_sup, feasible_region, ExtReal, Objective, PiecewiseBound, PreparedFn, RegionInterval,
    SupCell, Term, DEFAULT_NODE_BUDGET,
};
use crate::tables::{a_table_with, astar_table_with, HypothesisMode, DEFAULT_PINTZ_MAX_N};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Active {
    L2,
    L4,
    #[serde(rename = "EMPTY")]
    Empty,
}

impl fmt::Display for Active {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Active::L2 => "L2",
            Active::L4 => "L4",
            Active::Empty => "EMPTY",
        })
    }
}

#[derive(Clone, Debug)]
pub struct MuOptions {
    pub tol: f64,
    /// Use both moments; otherwise the second moment alone.
    pub refined: bool,
    pub pintz_max_n: u32,
    pub node_budget: usize,
}

impl Default for MuOptions {
    fn default() -> Self {
        MuOptions { tol: DEFAULT_TOL, refined: true, pintz_max_n: DEFAULT_PINTZ_MAX_N, node_budget: DEFAULT_NODE_BUDGET }
    }
}

impl MuOptions {
    pub fn with_tol(tol: f64) -> Self {
        MuOptions { tol, ..Default::default() }
    }

    pub fn l2_only(mut self) -> Self {
        self.refined = false;
        self
    }
}

#[derive(Clone, Debug)]
pub struct MuBoundResult {
    pub theta: Rational,
    pub mode: HypothesisMode,
    /// Certified upper bound, `-inf` for an empty feasible region.
    pub upper: f64,
    pub lower: f64,
    pub witness_sigma: Option<BoundaryPoint>,
    pub active: Active,
    pub tol: f64,
    pub refined: bool,
    pub nodes: usize,
}

impl MuBoundResult {
    pub fn is_empty(&self) -> bool {
        self.active == Active::Empty
    }

    pub fn gap_exponent(&self) -> f64 {
        self.upper - crate::exact::Interval::from_rational(&self.theta).mid()
    }
}

#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub theta: Rational,
    pub mu_upper: f64,
    pub gap_exponent: f64,
    pub result: MuBoundResult,
}

fn check_theta(theta: &Rational) -> Result<()> {
    if theta <= &Rational::zero() || theta >= &Rational::one() {
        return Err(Error::OutOfDomain(format!("theta = {theta} must lie in (0, 1)")));
    }
    Ok(())
}

fn moment_value(
    table: &PiecewiseBound,
    sigma: &BoundaryPoint,
    theta: &Rational,
    slope: i64,
    intercept: i64,
) -> Result<ExtReal> {
    check_theta(theta)?;
    let a = table.evaluate_upper(sigma)?;
    let Some(a) = a.finite() else { return Ok(a) };
    let weight = sigma.neg().add_rational(&Rational::one()).scale(&(Rational::one() - theta));
    let v = weight
        .checked_mul(a)
        .and_then(|v| v.checked_add(&sigma.scale(&int(slope))))
        .map(|v| v.add_rational(&int(intercept)))
        .ok_or_else(|| Error::OutOfDomain("mixed quadratic fields".into()))?;
    Ok(ExtReal::Finite(v))
}

/// `(1 − θ)(1 − σ)Ã(σ) + 2σ − 1`, exact.
pub fn mu2(sigma: &BoundaryPoint, theta: &Rational, mode: HypothesisMode) -> Result<ExtReal> {
    moment_value(&*a_table_with(mode, DEFAULT_PINTZ_MAX_N)?, sigma, theta, 2, -1)
}

/// `(1 − θ)(1 − σ)Ã*(σ) + 4σ − 3`, exact.
pub fn mu4(sigma: &BoundaryPoint, theta: &Rational, mode: HypothesisMode) -> Result<ExtReal> {
    moment_value(&*astar_table_with(mode, DEFAULT_PINTZ_MAX_N)?, sigma, theta, 4, -3)
}

/// A table together with `((1 − σ)·F).reduced()` prepared for every formula.
struct PreparedTable {
    pw: Arc<PiecewiseBound>,
    g: Vec<Vec<Arc<PreparedFn>>>,
}

impl PreparedTable {
    fn new(pw: Arc<PiecewiseBound>) -> Self {
        let one_minus = Polynomial::from_ints(&[1, -1]);
        let g = pw
            .pieces()
            .iter()
            .map(|p| p.formula.formulas().iter().map(|f| Arc::new(f.mul_poly(&one_minus).reduced().prepare())).collect())
            .collect();
        PreparedTable { pw, g }
    }

    /// Index of the piece whose closed domain contains `[lo, hi]`, `lo < hi`.
    fn piece_for(&self, lo: &BoundaryPoint) -> usize {
        self.pw.pieces().partition_point(|p| &p.hi <= lo)
    }

    fn indices_at(&self, s: &BoundaryPoint) -> Vec<usize> {
        let pieces = self.pw.pieces();
        let first = pieces.partition_point(|p| &p.hi < s);
        (first..pieces.len()).take_while(|&i| pieces[i].contains(s)).collect()
    }
}

type PreparedCache = Mutex<HashMap<(bool, HypothesisMode, u32), Arc<PreparedTable>>>;

fn prepared(star: bool, mode: HypothesisMode, n: u32) -> Result<Arc<PreparedTable>> {
    static CACHE: OnceLock<PreparedCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(star, mode, n)) {
        return Ok(t.clone());
    }
    let pw = if star { astar_table_with(mode, n)? } else { a_table_with(mode, n)? };
    let t = Arc::new(PreparedTable::new(pw));
    cache.lock().unwrap().insert((star, mode, n), t.clone());
    Ok(t)
}

/// `{σ : Ã(σ) ≥ 1/(1 − θ)}` for `mode`.
pub fn feasible_sigma_region(theta: &Rational, mode: HypothesisMode, pintz_max_n: u32) -> Result<Vec<RegionInterval>> {
    check_theta(theta)?;
    let c = Rational::one() / (Rational::one() - theta);
    Ok(feasible_region(&*a_table_with(mode, pintz_max_n)?, &c))
}

struct MomentShape {
    scale: Interval,
    slope: Interval,
    intercept: Interval,
}

fn group_terms(table: &PreparedTable, idx: &[usize], shape: &MomentShape) -> Vec<Term> {
    idx.iter()
        .flat_map(|&i| {
            table.g[i]
                .iter()
                .map(|g| Term::with_intervals(g.clone(), shape.scale, shape.slope, shape.intercept))
        })
        .collect()
}

fn build_cells(
    region: &[RegionInterval],
    a: &PreparedTable,
    s: Option<&PreparedTable>,
    theta: &Rational,
) -> Vec<SupCell> {
    let scale = Interval::from_rational(&(Rational::one() - theta));
    let l2 = MomentShape { scale, slope: Interval::point(2.0), intercept: Interval::point(-1.0) };
    let l4 = MomentShape { scale, slope: Interval::point(4.0), intercept: Interval::point(-3.0) };
    let objective = |a_idx: &[usize], s_idx: &[usize]| {
        let mut groups = vec![group_terms(a, a_idx, &l2)];
        if let Some(s) = s {
            groups.push(group_terms(s, s_idx, &l4));
        }
        Objective::new(groups)
    };
    let mut cells = Vec::new();
    for r in region {
        let mut points = vec![r.lo.clone(), r.hi.clone()];
        for t in std::iter::once(a).chain(s) {
            let pieces = t.pw.pieces();
            let first = pieces.partition_point(|p| p.lo <= r.lo);
            for p in &pieces[first..] {
                if p.lo >= r.hi {
                    break;
                }
                points.push(p.lo.clone());
            }
        }
        points.sort();
        points.dedup();
        for p in &points {
            let a_idx = a.indices_at(p);
            let s_idx = s.map(|s| s.indices_at(p)).unwrap_or_default();
            cells.push(SupCell { lo: p.clone(), hi: p.clone(), objective: objective(&a_idx, &s_idx) });
        }
        for w in points.windows(2) {
            let a_idx = [a.piece_for(&w[0])];
            let s_idx = s.map(|s| vec![s.piece_for(&w[0])]).unwrap_or_default();
            cells.push(SupCell { lo: w[0].clone(), hi: w[1].clone(), objective: objective(&a_idx, &s_idx) });
        }
    }
    cells
}

/// Certified upper bound for μ(θ).
pub fn mu_upper(theta: &Rational, mode: HypothesisMode, opts: &MuOptions) -> Result<MuBoundResult> {
    check_theta(theta)?;
    let region = feasible_sigma_region(theta, mode, opts.pintz_max_n)?;
    let empty = MuBoundResult {
        theta: theta.clone(),
        mode,
        upper: f64::NEG_INFINITY,
        lower: f64::NEG_INFINITY,
        witness_sigma: None,
        active: Active::Empty,
        tol: opts.tol,
        refined: opts.refined,
        nodes: 0,
    };
    if region.is_empty() {
        return Ok(empty);
    }
    let a = prepared(false, mode, opts.pintz_max_n)?;
    let s = if opts.refined { Some(prepared(true, mode, opts.pintz_max_n)?) } else { None };
    let cells = build_cells(&region, &a, s.as_deref(), theta);
    let sup = certified_sup(&cells, opts.tol, opts.node_budget)?;
    if sup.upper == f64::NEG_INFINITY {
        return Ok(empty);
    }
    let active = match sup.active_group {
        Some(1) => Active::L4,
        _ => Active::L2,
    };
    Ok(MuBoundResult {
        upper: sup.upper,
        lower: sup.lower,
        witness_sigma: sup.witness,
        active,
        nodes: sup.nodes,
        ..empty
    })
}

/// `θ_k = θ_min + k(θ_max − θ_min)/steps` for `k = 0..=steps`.
pub fn theta_grid(theta_min: &Rational, theta_max: &Rational, steps: u32) -> Result<Vec<Rational>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if theta_min >= theta_max {
        return Err(Error::InvalidArgument("theta-min must be below theta-max".into()));
    }
    check_theta(theta_min)?;
    check_theta(theta_max)?;
    let h = (theta_max - theta_min) / int(steps as i64);
    Ok((0..=steps).map(|k| theta_min + &h * int(k as i64)).collect())
}

/// μ bounds on a uniform θ grid, evaluated in parallel; output is in grid
/// order and independent of the thread count.
pub fn mu_curve(
    theta_min: &Rational,
    theta_max: &Rational,
    steps: u32,
    mode: HypothesisMode,
    opts: &MuOptions,
) -> Result<Vec<CurvePoint>> {
    let grid = theta_grid(theta_min, theta_max, steps)?;
    mu_on_grid(&grid, mode, opts)
}

pub fn mu_on_grid(grid: &[Rational], mode: HypothesisMode, opts: &MuOptions) -> Result<Vec<CurvePoint>> {
    grid.par_iter()
        .map(|t| {
            let r = mu_upper(t, mode, opts)?;
            Ok(CurvePoint { theta: t.clone(), mu_upper: r.upper, gap_exponent: r.gap_exponent(), result: r })
        })
        .collect()
}

/// `μ(θ) − θ` bound for the count of large prime gaps.
pub fn gap_exponent(theta: &Rational, mode: HypothesisMode, opts: &MuOptions) -> Result<f64> {
    Ok(mu_upper(theta, mode, opts)?.gap_exponent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn fin(n: i64, d: i64) -> ExtReal {
        ExtReal::Finite(BoundaryPoint::from_ratio(n, d))
    }

    #[test]
    fn exact_moments() {
        let u = HypothesisMode::Unconditional;
        let s = BoundaryPoint::from_ratio(7, 10);
        assert_eq!(mu2(&s, &rat(2, 15), u).unwrap(), fin(1, 1));
        assert_eq!(mu4(&s, &rat(17, 30), u).unwrap(), fin(7, 12));
        let half = BoundaryPoint::from_ratio(1, 2);
        assert_eq!(mu2(&half, &rat(1, 3), u).unwrap(), fin(2, 3));
        assert_eq!(mu4(&half, &rat(1, 3), u).unwrap(), fin(1, 1));
        assert_eq!(mu2(&BoundaryPoint::from_ratio(3, 5), &rat(1, 3), HypothesisMode::Rh).unwrap(), ExtReal::NegInfinity);
        assert!(mu2(&half, &rat(3, 2), u).is_err());
    }

    #[test]
    fn l4_under_lindelof_at_three_quarters() {
        // Table 2 gives 50/9 there, below the trivial 3·2
        let v = mu4(&BoundaryPoint::from_ratio(3, 4), &rat(1, 2), HypothesisMode::Lh).unwrap();
        assert_eq!(v, fin(25, 36));
    }

    #[test]
    fn seventeen_thirtieths() {
        let r = mu_upper(&rat(17, 30), HypothesisMode::Unconditional, &MuOptions::default()).unwrap();
        assert!((r.upper - 7.0 / 12.0).abs() <= 1e-9);
        assert_eq!(r.active, Active::L4);
        assert_eq!(r.witness_sigma, Some(BoundaryPoint::from_ratio(7, 10)));
    }

    #[test]
    fn empty_above_seventeen_thirtieths() {
        let r = mu_upper(&rat(3, 5), HypothesisMode::Unconditional, &MuOptions::default()).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.upper, f64::NEG_INFINITY);
    }

    #[test]
    fn grid_is_exact() {
        let g = theta_grid(&rat(1, 2), &rat(11, 20), 5).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[1], rat(51, 100));
        assert!(theta_grid(&rat(1, 2), &rat(1, 2), 5).is_err());
    }
}
