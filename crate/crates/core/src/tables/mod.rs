//! Zero-density exponent tables A(σ) and A*(σ) and the hypothesis modes.

pub mod expr;
mod rows;
mod transcription;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, rat, BoundaryPoint, Rational};
use crate::piecewise::{pointwise_min, Piece, PieceFormula, PiecewiseBound, RationalFunction};

pub use rows::{encoded_rows, pintz_piece, table1_rows, table2_rows, RowFormula, TableKind, TableRow};
pub use transcription::{canonical_digest, canonical_text, parse_transcription, transcription_text};
pub use validate::{validate_tables, Breakpoint, TableDiagnostics};

pub const DEFAULT_PINTZ_MAX_N: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisMode {
    Unconditional,
    Dh,
    Lh,
    Rh,
}

impl HypothesisMode {
    pub const ALL: [HypothesisMode; 4] =
        [HypothesisMode::Unconditional, HypothesisMode::Dh, HypothesisMode::Lh, HypothesisMode::Rh];

    pub fn name(self) -> &'static str {
        match self {
            HypothesisMode::Unconditional => "unconditional",
            HypothesisMode::Dh => "dh",
            HypothesisMode::Lh => "lh",
            HypothesisMode::Rh => "rh",
        }
    }
}

impl fmt::Display for HypothesisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HypothesisMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unconditional" | "unc" => Ok(HypothesisMode::Unconditional),
            "dh" => Ok(HypothesisMode::Dh),
            "lh" => Ok(HypothesisMode::Lh),
            "rh" => Ok(HypothesisMode::Rh),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

/// Right end of the tabulated domain, `1 − 1/(2n(n+1))` for the last
/// instantiated family index `n`.
pub fn sigma_cap(pintz_max_n: u32) -> BoundaryPoint {
    let n = pintz_max_n as i64;
    BoundaryPoint::from_rational(int(1) - rat(1, 2 * n * (n + 1)))
}

fn half() -> BoundaryPoint {
    BoundaryPoint::from_ratio(1, 2)
}

fn exact_low_piece(numerator: i64) -> Piece {
    Piece::new(
        BoundaryPoint::zero(),
        half(),
        PieceFormula::Single(RationalFunction::from_factors(&[numerator], &[&[1, -1]])),
        "exact",
    )
}

fn constant(c: Rational) -> PieceFormula {
    PieceFormula::Single(RationalFunction::constant(c))
}

fn unconditional_a(pintz_max_n: u32) -> Result<PiecewiseBound> {
    if pintz_max_n < 6 {
        return Err(Error::InvalidFamilyIndex(pintz_max_n));
    }
    let mut pieces = vec![exact_low_piece(1)];
    for row in table1_rows() {
        if let RowFormula::Fixed(f) = row.formula {
            pieces.push(Piece::new(row.lo, row.hi, PieceFormula::Single(f), row.reference));
        }
    }
    for n in 6..=pintz_max_n {
        pieces.push(pintz_piece(n)?);
    }
    PiecewiseBound::new(pieces)
}

fn build_a(mode: HypothesisMode, pintz_max_n: u32) -> Result<PiecewiseBound> {
    let unc = unconditional_a(pintz_max_n)?;
    let cap = sigma_cap(pintz_max_n);
    match mode {
        HypothesisMode::Unconditional => Ok(unc),
        HypothesisMode::Dh => {
            let clip = PiecewiseBound::new(vec![exact_low_piece(1), Piece::new(half(), cap, constant(int(2)), "DH")])?;
            pointwise_min(&unc, &clip)
        }
        HypothesisMode::Lh => {
            let three_quarters = BoundaryPoint::from_ratio(3, 4);
            let clip = PiecewiseBound::new(vec![
                exact_low_piece(1),
                Piece::new(half(), three_quarters.clone(), constant(int(2)), "DH"),
                Piece::new(three_quarters, cap, constant(int(0)), "LH"),
            ])?;
            pointwise_min(&unc, &clip)
        }
        HypothesisMode::Rh => {
            PiecewiseBound::new(vec![exact_low_piece(1), Piece::new(half(), cap, PieceFormula::NegInfinity, "RH")])
        }
    }
}

/// Table 2 rows preceded by `3/(1 − σ)` on `[0, 1/2]`, truncated at the cap.
fn extended_astar(pintz_max_n: u32) -> Result<PiecewiseBound> {
    let cap = sigma_cap(pintz_max_n);
    let mut pieces = vec![exact_low_piece(3)];
    for row in table2_rows() {
        if row.lo >= cap {
            break;
        }
        let hi = if row.hi > cap { cap.clone() } else { row.hi };
        if let RowFormula::Fixed(f) = row.formula {
            pieces.push(Piece::new(row.lo, hi, PieceFormula::Single(f), row.reference));
        }
    }
    PiecewiseBound::new(pieces)
}

fn build_astar(mode: HypothesisMode, pintz_max_n: u32) -> Result<PiecewiseBound> {
    let trivial = a_table_with(mode, pintz_max_n)?.scale(&int(3), "3×");
    pointwise_min(&extended_astar(pintz_max_n)?, &trivial)
}

type Cache = Mutex<HashMap<(bool, HypothesisMode, u32), Arc<PiecewiseBound>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(
    star: bool,
    mode: HypothesisMode,
    n: u32,
    build: impl FnOnce() -> Result<PiecewiseBound>,
) -> Result<Arc<PiecewiseBound>> {
    if let Some(t) = cache().lock().unwrap().get(&(star, mode, n)) {
        return Ok(t.clone());
    }
    let t = Arc::new(build()?);
    cache().lock().unwrap().insert((star, mode, n), t.clone());
    Ok(t)
}

/// The majorant Ã(σ) for `mode`, tabulated on `[0, σ_cap)`.
pub fn a_table(mode: HypothesisMode) -> Arc<PiecewiseBound> {
    a_table_with(mode, DEFAULT_PINTZ_MAX_N).expect("default tables are valid")
}

pub fn a_table_with(mode: HypothesisMode, pintz_max_n: u32) -> Result<Arc<PiecewiseBound>> {
    cached(false, mode, pintz_max_n, || build_a(mode, pintz_max_n))
}

/// The effective energy majorant `min(Table 2, 3·Ã)` for `mode`.
pub fn astar_table(mode: HypothesisMode) -> Arc<PiecewiseBound> {
    astar_table_with(mode, DEFAULT_PINTZ_MAX_N).expect("default tables are valid")
}

pub fn astar_table_with(mode: HypothesisMode, pintz_max_n: u32) -> Result<Arc<PiecewiseBound>> {
    cached(true, mode, pintz_max_n, || build_astar(mode, pintz_max_n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::ExtReal;

    fn at(pw: &PiecewiseBound, n: i64, d: i64) -> ExtReal {
        pw.evaluate_upper(&BoundaryPoint::from_ratio(n, d)).unwrap()
    }

    fn fin(n: i64, d: i64) -> ExtReal {
        ExtReal::Finite(BoundaryPoint::from_ratio(n, d))
    }

    #[test]
    fn unconditional_values() {
        let a = a_table(HypothesisMode::Unconditional);
        assert_eq!(at(&a, 3, 4), fin(20, 9));
        assert_eq!(at(&a, 1, 2), fin(2, 1));
        assert_eq!(at(&a, 7, 10), fin(30, 13));
        assert_eq!(at(&a, 59, 60), fin(9, 13));
        assert_eq!(a.end(), &BoundaryPoint::from_ratio(8319, 8320));
    }

    #[test]
    fn hypothesis_values() {
        assert_eq!(at(&a_table(HypothesisMode::Rh), 3, 5), ExtReal::NegInfinity);
        assert_eq!(at(&a_table(HypothesisMode::Dh), 3, 5), fin(2, 1));
        assert_eq!(at(&a_table(HypothesisMode::Lh), 4, 5), fin(0, 1));
        assert_eq!(at(&a_table(HypothesisMode::Lh), 3, 4), fin(2, 1));
    }

    #[test]
    fn energy_values() {
        let s = astar_table(HypothesisMode::Unconditional);
        assert_eq!(at(&s, 7, 10), fin(235, 39));
        assert_eq!(at(&s, 9, 10), fin(9, 2));
        assert_eq!(at(&s, 1, 2), fin(6, 1));
        // Table 2 at 3/4 sits below the LH trivial bound 6
        assert_eq!(at(&astar_table(HypothesisMode::Lh), 3, 4), fin(50, 9));
    }

    #[test]
    fn modes_parse() {
        for m in HypothesisMode::ALL {
            assert_eq!(m.name().parse::<HypothesisMode>().unwrap(), m);
        }
        assert!("xh".parse::<HypothesisMode>().is_err());
    }

    #[test]
    fn small_family_cap_is_rejected() {
        assert!(matches!(a_table_with(HypothesisMode::Unconditional, 5), Err(Error::InvalidFamilyIndex(5))));
        let t = a_table_with(HypothesisMode::Unconditional, 8).unwrap();
        assert_eq!(t.end(), &BoundaryPoint::from_ratio(143, 144));
    }
}
