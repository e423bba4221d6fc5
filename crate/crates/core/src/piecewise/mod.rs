//! Piecewise rational functions of σ: upper-regularized evaluation,
//! pointwise minima, superlevel sets and certified suprema.

mod rational_fn;
pub mod roots;
mod sup;

use std::cmp::Ordering;
use std::fmt;

pub use rational_fn::{enclose_prepared, enclose_rational_function, PreparedFn, RationalFunction};
pub use sup::{certified_sup, certified_sup_of, certified_sup_piecewise, Objective, SupCell, SupResult, Term, DEFAULT_NODE_BUDGET};

use crate::error::{Error, Result};
use crate::exact::{BoundaryPoint, Interval, Rational};
use roots::{roots_in_closed, roots_strictly_inside, Root};

/// A real number extended by ±∞, with exact finite values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtReal {
    NegInfinity,
    Finite(BoundaryPoint),
    PosInfinity,
}

impl ExtReal {
    pub fn finite(&self) -> Option<&BoundaryPoint> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInfinity => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v.to_f64(),
            ExtReal::PosInfinity => f64::INFINITY,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegInfinity, NegInfinity) | (PosInfinity, PosInfinity) => Ordering::Equal,
            (NegInfinity, _) | (_, PosInfinity) => Ordering::Less,
            (_, NegInfinity) | (PosInfinity, _) => Ordering::Greater,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInfinity => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInfinity => write!(f, "inf"),
        }
    }
}

/// The formula attached to one piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceFormula {
    NegInfinity,
    Single(RationalFunction),
    /// Pointwise maximum of several formulas; used across a crossing that
    /// could only be bracketed.
    Bracket(Vec<RationalFunction>),
}

impl PieceFormula {
    pub fn formulas(&self) -> &[RationalFunction] {
        match self {
            PieceFormula::NegInfinity => &[],
            PieceFormula::Single(f) => std::slice::from_ref(f),
            PieceFormula::Bracket(fs) => fs,
        }
    }

    pub fn eval_point(&self, s: &BoundaryPoint) -> ExtReal {
        self.formulas()
            .iter()
            .map(|f| ExtReal::Finite(f.eval_point(s).expect("denominator is nonzero on its piece")))
            .max()
            .unwrap_or(ExtReal::NegInfinity)
    }

    fn scale(&self, k: &Rational) -> Self {
        match self {
            PieceFormula::NegInfinity => PieceFormula::NegInfinity,
            PieceFormula::Single(f) => PieceFormula::Single(f.scale(k)),
            PieceFormula::Bracket(fs) => PieceFormula::Bracket(fs.iter().map(|f| f.scale(k)).collect()),
        }
    }
}

impl fmt::Display for PieceFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceFormula::NegInfinity => write!(f, "-inf"),
            PieceFormula::Single(g) => write!(f, "{g}"),
            PieceFormula::Bracket(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| g.to_string()).collect();
                write!(f, "max({})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub lo: BoundaryPoint,
    pub hi: BoundaryPoint,
    pub formula: PieceFormula,
    pub provenance: String,
}

impl Piece {
    pub fn new(lo: BoundaryPoint, hi: BoundaryPoint, formula: PieceFormula, provenance: impl Into<String>) -> Self {
        Piece { lo, hi, formula, provenance: provenance.into() }
    }

    pub fn contains(&self, s: &BoundaryPoint) -> bool {
        &self.lo <= s && s <= &self.hi
    }
}

/// Ordered pieces tiling `[start, end)`, evaluated with the
/// upper regularization (maximum of adjacent values) at shared breakpoints.
#[derive(Clone, Debug)]
pub struct PiecewiseBound {
    pieces: Vec<Piece>,
}

impl PiecewiseBound {
    /// Validates ordering, exact abutment, and that each denominator keeps
    /// one sign on its closed piece.
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("a piecewise bound needs at least one piece".into()));
        }
        for w in pieces.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(Error::InvalidArgument(format!(
                    "pieces do not abut: {} then {}",
                    w[0].hi, w[1].lo
                )));
            }
        }
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(Error::InvalidArgument(format!("empty piece [{}, {}]", p.lo, p.hi)));
            }
            for f in p.formula.formulas() {
                if f.denominator_sign(&p.lo, &p.hi).is_none() {
                    return Err(Error::DenominatorVanishes);
                }
            }
        }
        Ok(PiecewiseBound { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> &BoundaryPoint {
        &self.pieces[0].lo
    }

    /// Right end of the domain (excluded).
    pub fn end(&self) -> &BoundaryPoint {
        &self.pieces.last().unwrap().hi
    }

    /// Pieces whose closed domain contains `s` (one, or two at a breakpoint).
    pub fn pieces_at(&self, s: &BoundaryPoint) -> &[Piece] {
        let first = self.pieces.partition_point(|p| &p.hi < s);
        let mut last = first;
        while last < self.pieces.len() && self.pieces[last].contains(s) {
            last += 1;
        }
        &self.pieces[first..last]
    }

    pub fn evaluate_upper(&self, s: &BoundaryPoint) -> Result<ExtReal> {
        if s < self.start() || s >= self.end() {
            return Err(Error::OutOfDomain(s.to_string()));
        }
        Ok(self.pieces_at(s).iter().map(|p| p.formula.eval_point(s)).max().unwrap_or(ExtReal::NegInfinity))
    }

    /// Multiply every formula by a positive rational.
    pub fn scale(&self, k: &Rational, label: &str) -> Self {
        assert!(k > &Rational::from_integer(0.into()), "scale factor must be positive");
        PiecewiseBound {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    formula: p.formula.scale(k),
                    provenance: format!("{label}{}", p.provenance),
                })
                .collect(),
        }
    }

    /// Interior breakpoints (shared endpoints of consecutive pieces).
    pub fn breakpoints(&self) -> Vec<&BoundaryPoint> {
        self.pieces.iter().skip(1).map(|p| &p.lo).collect()
    }

    /// Restrict to `[start, new_end)`; `new_end` must lie in the domain.
    pub fn truncate(&self, new_end: &BoundaryPoint) -> Result<Self> {
        let mut out = Vec::new();
        for p in &self.pieces {
            if &p.lo >= new_end {
                break;
            }
            let mut q = p.clone();
            if &q.hi > new_end {
                q.hi = new_end.clone();
            }
            out.push(q);
        }
        PiecewiseBound::new(out)
    }
}

fn interior_probe(lo: &BoundaryPoint, hi: &BoundaryPoint) -> BoundaryPoint {
    BoundaryPoint::from_rational(lo.rational_between(hi))
}

/// Pointwise minimum of two bounds on the same domain. Crossings inside a
/// cell become new breakpoints: exact when they are quadratic irrationals,
/// otherwise a narrow bracket on which the larger formula is kept.
pub fn pointwise_min(a: &PiecewiseBound, b: &PiecewiseBound) -> Result<PiecewiseBound> {
    if a.start() != b.start() || a.end() != b.end() {
        return Err(Error::DomainMismatch);
    }
    let mut out: Vec<Piece> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut cur = a.start().clone();
    while i < a.pieces.len() && j < b.pieces.len() {
        let (pa, pb) = (&a.pieces[i], &b.pieces[j]);
        let next = if pa.hi <= pb.hi { pa.hi.clone() } else { pb.hi.clone() };
        for piece in min_on_cell(&cur, &next, pa, pb) {
            push_merged(&mut out, piece);
        }
        if pa.hi == next {
            i += 1;
        }
        if pb.hi == next {
            j += 1;
        }
        cur = next;
    }
    PiecewiseBound::new(out)
}

fn push_merged(out: &mut Vec<Piece>, piece: Piece) {
    if let Some(last) = out.last_mut() {
        if last.formula == piece.formula && last.provenance == piece.provenance && last.hi == piece.lo {
            last.hi = piece.hi;
            return;
        }
    }
    out.push(piece);
}

fn min_on_cell(lo: &BoundaryPoint, hi: &BoundaryPoint, pa: &Piece, pb: &Piece) -> Vec<Piece> {
    let piece = |formula: PieceFormula, prov: &str| Piece::new(lo.clone(), hi.clone(), formula, prov);
    match (&pa.formula, &pb.formula) {
        (PieceFormula::NegInfinity, _) => vec![piece(PieceFormula::NegInfinity, &pa.provenance)],
        (_, PieceFormula::NegInfinity) => vec![piece(PieceFormula::NegInfinity, &pb.provenance)],
        (PieceFormula::Single(f), PieceFormula::Single(g)) => {
            if f == g {
                return vec![piece(pa.formula.clone(), &pa.provenance)];
            }
            min_of_two(lo, hi, f, g, pa, pb)
        }
        _ => {
            let mut all: Vec<RationalFunction> = pa.formula.formulas().to_vec();
            all.extend(pb.formula.formulas().iter().cloned());
            vec![piece(PieceFormula::Bracket(all), &format!("{} / {}", pa.provenance, pb.provenance))]
        }
    }
}

fn min_of_two(
    lo: &BoundaryPoint,
    hi: &BoundaryPoint,
    f: &RationalFunction,
    g: &RationalFunction,
    pa: &Piece,
    pb: &Piece,
) -> Vec<Piece> {
    // sign(f − g) = sign(D) · sign(den_f · den_g)
    let diff = f.num().mul(g.den()).sub(&g.num().mul(f.den()));
    let probe = interior_probe(lo, hi);
    let den_sign = match (f.den().eval_point(&probe).signum(), g.den().eval_point(&probe).signum()) {
        (x, y) if x == y => 1,
        _ => -1,
    };
    let mut cuts: Vec<(BoundaryPoint, BoundaryPoint)> = Vec::new();
    for r in roots_strictly_inside(&diff, lo, hi) {
        match r {
            Root::Exact(p) => cuts.push((p.clone(), p)),
            Root::Bracket(a, b) => cuts.push((BoundaryPoint::from_rational(a), BoundaryPoint::from_rational(b))),
        }
    }
    let mut out = Vec::new();
    let mut start = lo.clone();
    let mut segments: Vec<(BoundaryPoint, BoundaryPoint, bool)> = Vec::new();
    for (a, b) in cuts {
        if start < a {
            segments.push((start.clone(), a.clone(), false));
        }
        if a < b {
            segments.push((a, b.clone(), true));
        }
        start = b;
    }
    if start < *hi {
        segments.push((start, hi.clone(), false));
    }
    for (a, b, bracket) in segments {
        if bracket {
            out.push(Piece::new(
                a,
                b,
                PieceFormula::Bracket(vec![f.clone(), g.clone()]),
                format!("{} / {}", pa.provenance, pb.provenance),
            ));
            continue;
        }
        let m = interior_probe(&a, &b);
        let s = diff.eval_point(&m).signum();
        let f_smaller = match s {
            Ordering::Less => den_sign > 0,
            Ordering::Greater => den_sign < 0,
            Ordering::Equal => true,
        };
        let (formula, prov) =
            if f_smaller { (f.clone(), &pa.provenance) } else { (g.clone(), &pb.provenance) };
        out.push(Piece::new(a, b, PieceFormula::Single(formula), prov.clone()));
    }
    out
}

/// A closed σ-interval of a superlevel set; `right_open` marks an interval
/// that runs into the excluded right end of the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionInterval {
    pub lo: BoundaryPoint,
    pub hi: BoundaryPoint,
    pub right_open: bool,
}

impl RegionInterval {
    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for RegionInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}{}", self.lo, self.hi, if self.right_open { ")" } else { "]" })
    }
}

/// Maximal intervals of `{ σ : evaluate_upper(pw, σ) ≥ c }`.
///
/// Each closed piece contributes the set where its own formula is at least
/// `c`; the union of these is exactly the superlevel set of the upper
/// regularization. Bracketed roots are included whole.
pub fn feasible_region(pw: &PiecewiseBound, c: &Rational) -> Vec<RegionInterval> {
    let c_iv = Interval::from_rational(c);
    let mut parts: Vec<(BoundaryPoint, BoundaryPoint)> = Vec::new();
    for piece in &pw.pieces {
        let hull = Interval::new(piece.lo.enclose(53).lo(), piece.hi.enclose(53).hi());
        for f in piece.formula.formulas() {
            if let Ok(range) = enclose_rational_function(f, hull) {
                if range.hi() < c_iv.lo() {
                    continue;
                }
                if range.lo() > c_iv.hi() {
                    parts.push((piece.lo.clone(), piece.hi.clone()));
                    continue;
                }
            }
            superlevel_on_piece(f, c, &piece.lo, &piece.hi, &mut parts);
        }
    }
    parts.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut merged: Vec<RegionInterval> = Vec::new();
    for (lo, hi) in parts {
        if let Some(last) = merged.last_mut() {
            if lo <= last.hi {
                if hi > last.hi {
                    last.hi = hi;
                }
                continue;
            }
        }
        merged.push(RegionInterval { lo, hi, right_open: false });
    }
    if let Some(last) = merged.last_mut() {
        last.right_open = &last.hi == pw.end();
    }
    merged
}

fn superlevel_on_piece(
    f: &RationalFunction,
    c: &Rational,
    lo: &BoundaryPoint,
    hi: &BoundaryPoint,
    parts: &mut Vec<(BoundaryPoint, BoundaryPoint)>,
) {
    // f ≥ c  ⇔  sign(den) · (num − c·den) ≥ 0
    let resid = f.num().sub(&f.den().scale(c));
    if resid.is_zero() {
        parts.push((lo.clone(), hi.clone()));
        return;
    }
    let flip = f.denominator_sign(lo, hi) == Some(Ordering::Less);
    let holds = |s: &BoundaryPoint| {
        let v = resid.eval_point(s).signum();
        let v = if flip { v.reverse() } else { v };
        v != Ordering::Less
    };
    let mut points: Vec<(BoundaryPoint, BoundaryPoint)> = vec![(lo.clone(), lo.clone())];
    for r in roots_in_closed(&resid, lo, hi) {
        match r {
            Root::Exact(p) => {
                if &p > lo && &p < hi {
                    points.push((p.clone(), p));
                }
            }
            Root::Bracket(a, b) => {
                let a = BoundaryPoint::from_rational(a).max(lo.clone());
                let b = BoundaryPoint::from_rational(b).min(hi.clone());
                parts.push((a.clone(), b.clone()));
                points.push((a, b));
            }
        }
    }
    points.push((hi.clone(), hi.clone()));
    points.sort_by(|x, y| x.0.cmp(&y.0));
    for (a, b) in &points {
        if a == b && holds(a) {
            parts.push((a.clone(), a.clone()));
        }
    }
    for w in points.windows(2) {
        let (a, b) = (&w[0].1, &w[1].0);
        if a < b && holds(&interior_probe(a, b)) {
            parts.push((a.clone(), b.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn bp(n: i64, d: i64) -> BoundaryPoint {
        BoundaryPoint::from_ratio(n, d)
    }

    fn single(num: &[i64], den: &[&[i64]]) -> PieceFormula {
        PieceFormula::Single(RationalFunction::from_factors(num, den))
    }

    fn step_bound() -> PiecewiseBound {
        PiecewiseBound::new(vec![
            Piece::new(bp(0, 1), bp(1, 2), single(&[1], &[&[1, -1]]), "low"),
            Piece::new(bp(1, 2), bp(7, 10), single(&[3], &[&[2, -1]]), "Ingham"),
            Piece::new(bp(7, 10), bp(19, 25), single(&[15], &[&[3, 5]]), "Guth-Maynard"),
            Piece::new(bp(19, 25), bp(4, 5), PieceFormula::NegInfinity, "none"),
        ])
        .unwrap()
    }

    #[test]
    fn evaluation_regularizes_breakpoints() {
        let pw = step_bound();
        assert_eq!(pw.evaluate_upper(&bp(3, 4)).unwrap(), ExtReal::Finite(bp(20, 9)));
        assert_eq!(pw.evaluate_upper(&bp(1, 2)).unwrap(), ExtReal::Finite(bp(2, 1)));
        assert_eq!(pw.evaluate_upper(&bp(7, 10)).unwrap(), ExtReal::Finite(bp(30, 13)));
        assert_eq!(pw.evaluate_upper(&bp(19, 25)).unwrap(), ExtReal::Finite(bp(375, 170)));
        assert_eq!(pw.evaluate_upper(&bp(79, 100)).unwrap(), ExtReal::NegInfinity);
        assert!(matches!(pw.evaluate_upper(&bp(4, 5)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn pieces_must_abut() {
        let res = PiecewiseBound::new(vec![
            Piece::new(bp(0, 1), bp(1, 2), single(&[1], &[&[1, -1]]), "a"),
            Piece::new(bp(3, 5), bp(4, 5), single(&[1], &[&[1, -1]]), "b"),
        ]);
        assert!(res.is_err());
    }

    #[test]
    fn min_is_idempotent() {
        let pw = step_bound();
        let m = pointwise_min(&pw, &pw).unwrap();
        assert_eq!(m.pieces().len(), pw.pieces().len());
        for k in 1..100 {
            let s = bp(k, 125);
            assert_eq!(m.evaluate_upper(&s).unwrap(), pw.evaluate_upper(&s).unwrap());
        }
    }

    #[test]
    fn min_inserts_exact_crossing() {
        // 3/(2 − σ) against the constant 2.1 on [1/2, 4/5): crossing at 4/7
        let a = PiecewiseBound::new(vec![Piece::new(bp(1, 2), bp(4, 5), single(&[3], &[&[2, -1]]), "a")]).unwrap();
        let b = PiecewiseBound::new(vec![Piece::new(
            bp(1, 2),
            bp(4, 5),
            PieceFormula::Single(RationalFunction::constant(rat(21, 10))),
            "b",
        )])
        .unwrap();
        let m = pointwise_min(&a, &b).unwrap();
        assert_eq!(m.pieces().len(), 2);
        assert_eq!(m.pieces()[0].hi, bp(4, 7));
        assert_eq!(m.pieces()[0].provenance, "a");
        assert_eq!(m.evaluate_upper(&bp(3, 4)).unwrap(), ExtReal::Finite(bp(21, 10)));
    }

    #[test]
    fn min_rejects_mismatched_domains() {
        let pw = step_bound();
        let other = pw.truncate(&bp(3, 4)).unwrap();
        assert!(matches!(pointwise_min(&pw, &other), Err(Error::DomainMismatch)));
    }

    #[test]
    fn superlevel_degenerates_to_a_point() {
        let pw = step_bound();
        let region = feasible_region(&pw, &rat(30, 13));
        assert_eq!(region, vec![RegionInterval { lo: bp(7, 10), hi: bp(7, 10), right_open: false }]);
        let all = feasible_region(&pw, &rat(0, 1));
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].lo, bp(0, 1));
        assert_eq!(all[0].hi, bp(19, 25));
    }
}
