//! Certified branch-and-bound maximization of a min-of-max objective over
//! a union of σ-cells.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use num_rational::BigRational;

use super::{PiecewiseBound, PreparedFn, RationalFunction, RegionInterval};
use crate::error::{Error, Result};
use crate::exact::{BoundaryPoint, Interval, Rational};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// `scale · g(σ) + slope · σ + intercept`.
#[derive(Clone, Debug)]
pub struct Term {
    g: Arc<PreparedFn>,
    scale: Interval,
    slope: Interval,
    intercept: Interval,
}

impl Term {
    pub fn new(g: Arc<PreparedFn>, scale: &Rational, slope: &Rational, intercept: &Rational) -> Self {
        Term {
            g,
            scale: Interval::from_rational(scale),
            slope: Interval::from_rational(slope),
            intercept: Interval::from_rational(intercept),
        }
    }

    pub fn with_intervals(g: Arc<PreparedFn>, scale: Interval, slope: Interval, intercept: Interval) -> Self {
        Term { g, scale, slope, intercept }
    }

    pub fn plain(f: &RationalFunction) -> Self {
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        Term::new(Arc::new(f.prepare()), &one, &zero, &zero)
    }

    fn natural(&self, x: Interval) -> Result<Interval> {
        Ok(self.scale * self.g.value(x)? + self.slope * x + self.intercept)
    }

    fn enclose(&self, x: Interval) -> Result<Interval> {
        let natural = self.natural(x)?;
        if x.is_point() {
            return Ok(natural);
        }
        let d = self.scale * self.g.derivative(x)? + self.slope;
        let at = |t: f64| self.natural(Interval::point(t));
        let bounded = if d.lo() > 0.0 {
            Interval::new(at(x.lo())?.lo(), at(x.hi())?.hi())
        } else if d.hi() < 0.0 {
            Interval::new(at(x.hi())?.lo(), at(x.lo())?.hi())
        } else {
            let m = x.mid();
            at(m)? + d * (x - Interval::point(m))
        };
        Ok(bounded.intersect(&natural).unwrap_or(natural))
    }
}

/// Minimum over groups of the maximum over each group's terms.
#[derive(Clone, Debug, Default)]
pub struct Objective {
    pub groups: Vec<Vec<Term>>,
}

impl Objective {
    pub fn new(groups: Vec<Vec<Term>>) -> Self {
        Objective { groups }
    }

    fn is_neg_infinite(&self) -> bool {
        self.groups.iter().any(|g| g.is_empty())
    }

    fn group_enclosures(&self, x: Interval) -> Result<Vec<Interval>> {
        self.groups
            .iter()
            .map(|terms| {
                let mut acc: Option<Interval> = None;
                for t in terms {
                    let v = t.enclose(x)?;
                    acc = Some(match acc {
                        Some(a) => a.max(&v),
                        None => v,
                    });
                }
                Ok(acc.expect("nonempty group"))
            })
            .collect()
    }

    pub fn enclose(&self, x: Interval) -> Result<Interval> {
        let gs = self.group_enclosures(x)?;
        Ok(gs.iter().skip(1).fold(gs[0], |a, b| a.min(b)))
    }

    /// Index of the group attaining the minimum at `x`, by upper endpoint.
    pub fn active_group(&self, x: Interval) -> Result<usize> {
        let gs = self.group_enclosures(x)?;
        Ok(gs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.hi().total_cmp(&b.1.hi()))
            .map(|(i, _)| i)
            .unwrap_or(0))
    }
}

/// A closed σ-interval with its objective. When `lo == hi` the cell is a
/// single point.
#[derive(Clone, Debug)]
pub struct SupCell {
    pub lo: BoundaryPoint,
    pub hi: BoundaryPoint,
    pub objective: Objective,
}

#[derive(Clone, Debug)]
pub struct SupResult {
    /// Certified upper bound for the supremum.
    pub upper: f64,
    /// A value the objective is known to reach (or approach) at `witness`.
    pub lower: f64,
    pub witness: Option<BoundaryPoint>,
    /// Group attaining the minimum at the witness.
    pub active_group: Option<usize>,
    pub nodes: usize,
}

impl SupResult {
    fn empty() -> Self {
        SupResult {
            upper: f64::NEG_INFINITY,
            lower: f64::NEG_INFINITY,
            witness: None,
            active_group: None,
            nodes: 0,
        }
    }
}

struct Node {
    cell: usize,
    x: Interval,
    upper: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.upper.total_cmp(&other.upper) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

struct Best {
    lower: f64,
    witness: Option<(usize, BoundaryPoint, Interval)>,
}

impl Best {
    fn offer(&mut self, value: f64, cell: usize, p: BoundaryPoint, x: Interval) {
        if value > self.lower {
            self.lower = value;
            self.witness = Some((cell, p, x));
        }
    }
}

/// Certified supremum of the cell objectives over the union of cells.
///
/// The returned `upper` bounds the supremum from above, `lower` is reached
/// by the objective (as a value or a limit) inside the union, and
/// `upper − lower ≤ tol` unless the node budget runs out, which is an
/// error.
pub fn certified_sup(cells: &[SupCell], tol: f64, budget: usize) -> Result<SupResult> {
    let cells: Vec<&SupCell> = cells.iter().filter(|c| !c.objective.is_neg_infinite()).collect();
    if cells.is_empty() {
        return Ok(SupResult::empty());
    }
    let mut best = Best { lower: f64::NEG_INFINITY, witness: None };
    let mut heap = BinaryHeap::new();
    let mut nodes = 0usize;
    let mut inner: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
    // endpoints: the regularized objective there is at least the cell's
    for (k, cell) in cells.iter().enumerate() {
        let lo = cell.lo.enclose(53);
        let hi = cell.hi.enclose(53);
        for (p, px) in [(&cell.lo, lo), (&cell.hi, hi)] {
            let v = cell.objective.enclose(px)?;
            nodes += 1;
            best.offer(v.lo(), k, p.clone(), px);
        }
        inner.push((lo.hi(), hi.lo()));
        let x = lo.hull(&hi);
        let upper = cell.objective.enclose(x)?.hi();
        heap.push(Node { cell: k, x, upper });
    }
    let mut stuck = f64::NEG_INFINITY;
    let mut pruned = f64::NEG_INFINITY;
    while let Some(top) = heap.peek() {
        if top.upper - best.lower <= tol {
            break;
        }
        let node = heap.pop().unwrap();
        if node.upper <= best.lower + tol {
            pruned = pruned.max(node.upper);
            continue;
        }
        if nodes >= budget {
            return Err(Error::NonConvergence { budget, gap: node.upper - best.lower });
        }
        let cell = cells[node.cell];
        let (a, b) = (node.x.lo(), node.x.hi());
        let m = a + (b - a) / 2.0;
        if !(m > a && m < b) {
            stuck = stuck.max(node.upper);
            continue;
        }
        // midpoint is a genuine feasible sample only if it is inside the cell
        let (inner_lo, inner_hi) = inner[node.cell];
        if m >= inner_lo && m <= inner_hi {
            let v = cell.objective.enclose(Interval::point(m))?;
            if v.lo() > best.lower {
                let witness = BoundaryPoint::from_rational(BigRational::from_float(m).expect("finite"));
                best.offer(v.lo(), node.cell, witness, Interval::point(m));
            }
        }
        for x in [Interval::new(a, m), Interval::new(m, b)] {
            nodes += 1;
            let upper = cell.objective.enclose(x)?.hi();
            if upper <= best.lower + tol {
                pruned = pruned.max(upper);
            } else {
                heap.push(Node { cell: node.cell, x, upper });
            }
        }
    }
    let top = heap.peek().map_or(f64::NEG_INFINITY, |n| n.upper);
    let upper = top.max(pruned).max(stuck).max(best.lower);
    if upper - best.lower > tol {
        return Err(Error::NonConvergence { budget, gap: upper - best.lower });
    }
    let (witness, active_group) = match &best.witness {
        Some((k, p, x)) => (Some(p.clone()), Some(cells[*k].objective.active_group(*x)?)),
        None => (None, None),
    };
    Ok(SupResult { upper, lower: best.lower, witness, active_group, nodes })
}

/// Certified supremum of a single rational function over a region.
pub fn certified_sup_of(f: &RationalFunction, region: &[RegionInterval], tol: f64) -> Result<SupResult> {
    let objective = Objective::new(vec![vec![Term::plain(f)]]);
    let cells: Vec<SupCell> = region
        .iter()
        .map(|r| SupCell { lo: r.lo.clone(), hi: r.hi.clone(), objective: objective.clone() })
        .collect();
    certified_sup(&cells, tol, DEFAULT_NODE_BUDGET)
}

/// Supremum of the upper regularization of `pw` over its whole domain.
pub fn certified_sup_piecewise(pw: &PiecewiseBound, tol: f64) -> Result<SupResult> {
    let cells: Vec<SupCell> = pw
        .pieces()
        .iter()
        .map(|p| SupCell {
            lo: p.lo.clone(),
            hi: p.hi.clone(),
            objective: Objective::new(vec![p.formula.formulas().iter().map(Term::plain).collect()]),
        })
        .collect();
    certified_sup(&cells, tol, DEFAULT_NODE_BUDGET)
}
