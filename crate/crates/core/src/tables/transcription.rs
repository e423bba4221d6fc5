//! The plain-text table transcription shipped with the crate.
//!
//! One row per line: `table | lo | hi | formula | reference | family`.
//! Blank lines and lines starting with `#` are ignored.

use sha2::{Digest, Sha256};

use super::expr::parse_expr;
use super::rows::{pintz_piece, RowFormula, TableKind, TableRow};
use super::DEFAULT_PINTZ_MAX_N;
use crate::error::{Error, Result};
use crate::exact::BoundaryPoint;
use crate::piecewise::PieceFormula;

pub fn transcription_text() -> &'static str {
    include_str!("../../data/tables.txt")
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Expression { text: format!("tables line {line}"), msg: msg.into() }
}

/// Parse a transcription. Family rows are checked member by member against
/// [`pintz_piece`] up to the default cap.
pub fn parse_transcription(text: &str) -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        if cols.len() != 6 {
            return Err(bad(line_no, format!("expected 6 columns, found {}", cols.len())));
        }
        let table = match cols[0] {
            "A" => TableKind::A,
            "A*" => TableKind::AStar,
            other => return Err(bad(line_no, format!("unknown table '{other}'"))),
        };
        let (lo, hi) = (parse_expr(cols[1])?, parse_expr(cols[2])?);
        let formula = parse_expr(cols[3])?;
        let reference = cols[4].to_string();
        if cols[5].is_empty() {
            out.push(TableRow {
                table,
                lo: lo.to_point(None)?,
                hi: hi.to_point(None)?,
                formula: RowFormula::Fixed(formula.to_function(None)?),
                reference,
            });
            continue;
        }
        let start: u32 = cols[5]
            .strip_prefix("n >=")
            .and_then(|k| k.trim().parse().ok())
            .ok_or_else(|| bad(line_no, "family column must read 'n >= k'"))?;
        if start != 6 {
            return Err(bad(line_no, "only the family starting at n = 6 is known"));
        }
        for n in start..=DEFAULT_PINTZ_MAX_N {
            let k = Some(n as i64);
            let member = pintz_piece(n)?;
            let same = lo.to_point(k)? == member.lo
                && hi.to_point(k)? == member.hi
                && PieceFormula::Single(formula.to_function(k)?) == member.formula;
            if !same {
                return Err(bad(line_no, format!("family member n = {n} differs from the encoded family")));
            }
        }
        out.push(TableRow {
            table,
            lo: lo.to_point(Some(start as i64))?,
            hi: BoundaryPoint::one(),
            formula: RowFormula::PintzFamily,
            reference,
        });
    }
    Ok(out)
}

/// Canonical one-line-per-row rendering, independent of how a row was
/// written down.
pub fn canonical_text(rows: &[TableRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let formula = match &r.formula {
            RowFormula::Fixed(f) => f.reduced().to_string(),
            RowFormula::PintzFamily => "pintz-family".to_string(),
        };
        out.push_str(&format!("{}|{}|{}|{}|{}\n", r.table, r.lo, r.hi, formula, r.reference));
    }
    out
}

pub fn canonical_digest(rows: &[TableRow]) -> String {
    let digest = Sha256::digest(canonical_text(rows).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
