//! Encoded table rows.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{int, rat, BoundaryPoint};
use crate::piecewise::{Piece, PieceFormula, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// Bounds on A(σ).
    A,
    /// Bounds on A*(σ).
    AStar,
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableKind::A => "A",
            TableKind::AStar => "A*",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowFormula {
    Fixed(RationalFunction),
    /// `3/(n(1 − 2(n − 1)(1 − σ)))` on `[1 − 1/(2n(n−1)), 1 − 1/(2n(n+1)))`, n ≥ 6.
    PintzFamily,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub table: TableKind,
    pub lo: BoundaryPoint,
    pub hi: BoundaryPoint,
    pub formula: RowFormula,
    pub reference: String,
}

const TTY: &str = "Tao-Trudgian-Yang";

fn row(table: TableKind, lo: BoundaryPoint, hi: BoundaryPoint, f: RationalFunction, reference: &str) -> TableRow {
    TableRow { table, lo, hi, formula: RowFormula::Fixed(f), reference: reference.to_string() }
}

fn q(n: i64, d: i64) -> BoundaryPoint {
    BoundaryPoint::from_ratio(n, d)
}

fn f(num: &[i64], den: &[&[i64]]) -> RationalFunction {
    RationalFunction::from_factors(num, den)
}

/// A(σ) rows for `σ ≥ 1/2`, the family row last.
pub fn table1_rows() -> Vec<TableRow> {
    let a = |lo, hi, fm, r: &str| row(TableKind::A, lo, hi, fm, r);
    let mut rows = vec![
        a(q(1, 2), q(7, 10), f(&[3], &[&[2, -1]]), "Ingham"),
        a(q(7, 10), q(19, 25), f(&[15], &[&[3, 5]]), "Guth-Maynard"),
        a(q(19, 25), q(127, 167), f(&[9], &[&[-2, 8]]), "Ivic"),
        a(q(127, 167), q(13, 17), f(&[15], &[&[-3, 13]]), "Ivic"),
        a(q(13, 17), q(17, 22), f(&[6], &[&[-1, 5]]), "Ivic"),
        a(q(17, 22), q(41, 53), f(&[2], &[&[-6, 9]]), TTY),
        a(q(41, 53), q(7, 9), f(&[9], &[&[-1, 7]]), "Ivic"),
        a(q(7, 9), q(1867, 2347), f(&[9], &[&[8], &[-1, 2]]), TTY),
        a(q(1867, 2347), q(4, 5), f(&[3], &[&[0, 2]]), "Bourgain"),
        a(q(4, 5), q(7, 8), f(&[3], &[&[0, 2]]), "Ivic"),
        a(q(7, 8), q(279, 314), f(&[3], &[&[-7, 10]]), "Heath-Brown"),
        a(q(279, 314), q(155, 174), f(&[24], &[&[-11, 30]]), "CDV"),
        a(q(155, 174), q(9, 10), f(&[24], &[&[-11, 30]]), "Ivic"),
        a(q(9, 10), q(31, 34), f(&[3], &[&[-7, 10]]), TTY),
        a(q(31, 34), q(14, 15), f(&[11], &[&[-36, 48]]), TTY),
        a(q(14, 15), q(2841, 3016), f(&[391], &[&[-2014, 2493]]), TTY),
        a(q(2841, 3016), q(859, 908), f(&[22232], &[&[-134765, 163248]]), TTY),
        a(q(859, 908), q(23, 24), f(&[356], &[&[-2279, 2742]]), TTY),
        a(q(23, 24), q(2211487, 2274732), f(&[3], &[&[-20, 24]]), "Pintz"),
        a(q(2211487, 2274732), q(39, 40), f(&[86152], &[&[-1311509, 1447460]]), TTY),
        a(q(39, 40), q(41, 42), f(&[2], &[&[-12, 15]]), "Pintz"),
        a(q(41, 42), q(59, 60), f(&[3], &[&[-35, 40]]), "Pintz"),
    ];
    rows.push(TableRow {
        table: TableKind::A,
        lo: q(59, 60),
        hi: q(1, 1),
        formula: RowFormula::PintzFamily,
        reference: "Pintz".to_string(),
    });
    rows
}

/// A*(σ) rows for `σ ≥ 1/2`; the last row runs to σ = 1.
pub fn table2_rows() -> Vec<TableRow> {
    let s = |lo, hi, fm, r: &str| row(TableKind::AStar, lo, hi, fm, r);
    let one_minus = [1, -1];
    let r1 = BoundaryPoint::surd(539, -1, 42121, 460);
    let r2 = BoundaryPoint::surd(5831, 1, 60001, 8240);
    let r3 = BoundaryPoint::surd(1273, -1, 128689, 1184);
    vec![
        s(q(1, 2), q(2, 3), f(&[10, -11], &[&[2, -1], &one_minus]), "Heath-Brown"),
        s(q(2, 3), q(7, 10), f(&[18, -19], &[&[4, -2], &one_minus]), "Heath-Brown"),
        s(q(7, 10), r1.clone(), f(&[90, -95], &[&[2], &[3, 5], &one_minus]), TTY),
        s(r1, q(165, 226), f(&[90, -88], &[&[15, 2], &one_minus]), TTY),
        s(q(165, 226), r2.clone(), f(&[457, -546], &[&[2], &[61, -58], &one_minus]), TTY),
        s(r2, q(42, 55), f(&[90, -95], &[&[2], &[3, 5], &one_minus]), TTY),
        s(q(42, 55), q(97, 127), f(&[18, -19], &[&[6], &[-11, 15], &one_minus]), TTY),
        s(q(97, 127), q(79, 103), f(&[54, -57], &[&[4], &[-1, 4], &one_minus]), TTY),
        s(q(79, 103), q(33, 43), f(&[18, -19], &[&[2], &[-27, 37], &one_minus]), TTY),
        s(q(33, 43), q(84, 109), f(&[90, -95], &[&[2], &[-3, 13], &one_minus]), TTY),
        s(q(84, 109), r3.clone(), f(&[18, -19], &[&[9], &[-2, 3], &one_minus]), TTY),
        s(r3, q(5, 6), f(&[40, -36], &[&[5], &[-1, 4], &one_minus]), TTY),
        s(q(5, 6), q(1, 1), f(&[12], &[&[-1, 4]]), "Heath-Brown"),
    ]
}

pub fn encoded_rows() -> Vec<TableRow> {
    let mut rows = table1_rows();
    rows.extend(table2_rows());
    rows
}

/// Member `n` of the Pintz family.
pub fn pintz_piece(n: u32) -> Result<Piece> {
    if n < 6 {
        return Err(Error::InvalidFamilyIndex(n));
    }
    let n = n as i64;
    let lo = BoundaryPoint::from_rational(int(1) - rat(1, 2 * n * (n - 1)));
    let hi = BoundaryPoint::from_rational(int(1) - rat(1, 2 * n * (n + 1)));
    // n(1 − 2(n−1)(1−σ)) = n(3 − 2n) + 2n(n−1)σ
    let formula = f(&[3], &[&[n * (3 - 2 * n), 2 * n * (n - 1)]]);
    Ok(Piece::new(lo, hi, PieceFormula::Single(formula), "Pintz"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::ExtReal;

    #[test]
    fn family_member_six() {
        let p = pintz_piece(6).unwrap();
        assert_eq!(p.lo, q(59, 60));
        assert_eq!(p.hi, q(83, 84));
        assert_eq!(p.formula.eval_point(&q(59, 60)), ExtReal::Finite(q(3, 5)));
        assert_eq!(pintz_piece(7).unwrap().lo, p.hi);
        assert!(matches!(pintz_piece(5), Err(Error::InvalidFamilyIndex(5))));
    }

    #[test]
    fn rows_abut() {
        for rows in [table1_rows(), table2_rows()] {
            for w in rows.windows(2) {
                assert_eq!(w[0].hi, w[1].lo);
            }
        }
        assert_eq!(table1_rows().len(), 23);
        assert_eq!(table2_rows().len(), 13);
    }
}
