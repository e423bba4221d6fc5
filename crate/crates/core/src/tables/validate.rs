//! Structural diagnostics for the tabulated majorants.

use serde::Serialize;

use super::{a_table_with, astar_table_with, sigma_cap, HypothesisMode, TableKind};
use crate::error::Result;
use crate::exact::{BoundaryPoint, Interval, Polynomial};
use crate::piecewise::{ExtReal, PiecewiseBound};

#[derive(Clone, Debug, Serialize)]
pub struct Breakpoint {
    pub sigma: String,
    pub sigma_f64: f64,
    pub left: String,
    pub right: String,
    /// `left − right`, exact when both sides are finite.
    pub jump: Option<String>,
    pub jump_f64: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableDiagnostics {
    pub mode: HypothesisMode,
    pub table: String,
    pub pieces: usize,
    pub start: String,
    pub end: String,
    pub covers_domain: bool,
    pub breakpoints: Vec<Breakpoint>,
    /// Smallest certified lower bound of the finite pieces.
    pub min_value: f64,
    pub positive: bool,
    /// Largest upward jump of `(1 − σ)Ã(σ)` across a breakpoint, with its location.
    pub monotone_jump_violation: Option<(f64, f64)>,
    /// Largest certified upper bound of `d/dσ[(1 − σ)Ã(σ)]` where it may be positive.
    pub monotone_slope_violation: Option<(f64, f64)>,
}

impl TableDiagnostics {
    pub fn breakpoint(&self, sigma: &BoundaryPoint) -> Option<&Breakpoint> {
        let key = sigma.to_string();
        self.breakpoints.iter().find(|b| b.sigma == key)
    }
}

fn side_value(pw: &PiecewiseBound, idx: usize, s: &BoundaryPoint) -> ExtReal {
    pw.pieces()[idx].formula.eval_point(s)
}

fn diagnose(mode: HypothesisMode, kind: TableKind, pw: &PiecewiseBound, cap: &BoundaryPoint) -> TableDiagnostics {
    let pieces = pw.pieces();
    let covers_domain = pw.start() == &BoundaryPoint::zero()
        && pw.end() == cap
        && pieces.windows(2).all(|w| w[0].hi == w[1].lo)
        && pieces.iter().all(|p| p.lo < p.hi);
    let mut breakpoints = Vec::new();
    let mut jump_violation: Option<(f64, f64)> = None;
    for (i, piece) in pieces.iter().enumerate().skip(1) {
        let s = &piece.lo;
        let left = side_value(pw, i - 1, s);
        let right = side_value(pw, i, s);
        let (jump, jump_f64) = match (left.finite(), right.finite()) {
            (Some(l), Some(r)) => match l.checked_sub(r) {
                Some(d) => (Some(d.to_string()), d.to_f64()),
                None => (None, l.to_f64() - r.to_f64()),
            },
            _ => (None, left.to_f64() - right.to_f64()),
        };
        if right > left {
            let rise = (1.0 - s.to_f64()) * (right.to_f64() - left.to_f64());
            if jump_violation.is_none_or(|(_, m)| rise > m) {
                jump_violation = Some((s.to_f64(), rise));
            }
        }
        breakpoints.push(Breakpoint {
            sigma: s.to_string(),
            sigma_f64: s.to_f64(),
            left: left.to_string(),
            right: right.to_string(),
            jump,
            jump_f64,
        });
    }
    let mut min_value = f64::INFINITY;
    let mut slope_violation: Option<(f64, f64)> = None;
    let one_minus = Polynomial::from_ints(&[1, -1]);
    for p in pieces {
        let hull = Interval::new(p.lo.enclose(53).lo(), p.hi.enclose(53).hi());
        let steps = 32;
        for f in p.formula.formulas() {
            let g = f.mul_poly(&one_minus).reduced().prepare();
            let prepared = f.prepare();
            for k in 0..steps {
                let a = hull.lo() + (hull.hi() - hull.lo()) * k as f64 / steps as f64;
                let b = hull.lo() + (hull.hi() - hull.lo()) * (k + 1) as f64 / steps as f64;
                let x = Interval::new(a, b.max(a));
                if let Ok(v) = crate::piecewise::enclose_prepared(&prepared, x) {
                    min_value = min_value.min(v.lo());
                }
                if let Ok(d) = g.derivative(x) {
                    if d.hi() > 0.0 && slope_violation.is_none_or(|(_, m)| d.hi() > m) {
                        slope_violation = Some((x.mid(), d.hi()));
                    }
                }
            }
        }
    }
    TableDiagnostics {
        mode,
        table: kind.to_string(),
        pieces: pieces.len(),
        start: pw.start().to_string(),
        end: pw.end().to_string(),
        covers_domain,
        breakpoints,
        min_value,
        positive: min_value > 0.0,
        monotone_jump_violation: jump_violation,
        monotone_slope_violation: slope_violation,
    }
}

/// Coverage, breakpoint jumps, positivity and monotonicity of `(1 − σ)Ã`
/// for every mode and both tables.
pub fn validate_tables(pintz_max_n: u32) -> Result<Vec<TableDiagnostics>> {
    let cap = sigma_cap(pintz_max_n);
    let mut out = Vec::new();
    for mode in HypothesisMode::ALL {
        out.push(diagnose(mode, TableKind::A, &*a_table_with(mode, pintz_max_n)?, &cap));
        out.push(diagnose(mode, TableKind::AStar, &*astar_table_with(mode, pintz_max_n)?, &cap));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pintz_jump_and_ingham_continuity() {
        let diags = validate_tables(64).unwrap();
        let unc = &diags[0];
        assert!(unc.covers_domain);
        let j = unc.breakpoint(&BoundaryPoint::from_ratio(59, 60)).unwrap();
        assert_eq!(j.jump.as_deref(), Some("6/65"));
        let c = unc.breakpoint(&BoundaryPoint::from_ratio(7, 10)).unwrap();
        assert_eq!(c.left, "30/13");
        assert_eq!(c.right, "30/13");
        assert!(unc.positive);
        let rh = diags.iter().find(|d| d.mode == HypothesisMode::Rh && d.table == "A").unwrap();
        assert_eq!(rh.pieces, 2);
        assert_eq!(rh.breakpoints[0].right, "-inf");
    }
}
