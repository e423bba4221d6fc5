//! Zeta-zero ordinates and sums over them.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Neumaier;
use crate::error::{Error, Result};

pub const DEFAULT_ENERGY_CAP: usize = 5000;

/// Ordinates `γ > 0` of zeros `1/2 + iγ`, strictly increasing.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    ordinates: Vec<f64>,
    source: String,
}

/// First zeros up to height 5100, shipped with the crate.
pub fn bundled_zeros() -> ZeroSet {
    parse_zeros(include_str!("../../data/zeros.txt"), "bundled").expect("bundled zeros are well formed")
}

pub fn load_zeros(path: &Path) -> Result<ZeroSet> {
    let text = std::fs::read_to_string(path)?;
    parse_zeros(&text, &path.display().to_string())
}

/// One positive decimal per line, strictly ascending. Blank lines are skipped.
pub fn parse_zeros(text: &str, source: &str) -> Result<ZeroSet> {
    let mut ordinates: Vec<f64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::ZerosParse { line: i + 1, msg: format!("'{line}' is not a number") })?;
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::ZerosParse { line: i + 1, msg: "ordinates must be positive".into() });
        }
        if ordinates.last().is_some_and(|&p| v <= p) {
            return Err(Error::ZerosOrder { line: i + 1 });
        }
        ordinates.push(v);
    }
    Ok(ZeroSet { ordinates, source: source.to_string() })
}

impl ZeroSet {
    pub fn from_ordinates(ordinates: Vec<f64>) -> Result<Self> {
        if ordinates.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
            return Err(Error::ZerosParse { line: 0, msg: "ordinates must be positive".into() });
        }
        if let Some(i) = ordinates.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::ZerosOrder { line: i + 2 });
        }
        Ok(ZeroSet { ordinates, source: "memory".into() })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Largest ordinate; zero for an empty set.
    pub fn max_t(&self) -> f64 {
        self.ordinates.last().copied().unwrap_or(0.0)
    }

    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    pub fn prefix(&self, n: usize) -> ZeroSet {
        ZeroSet { ordinates: self.ordinates[..n.min(self.len())].to_vec(), source: self.source.clone() }
    }

    fn up_to(&self, t: f64) -> Result<&[f64]> {
        if t > self.max_t() {
            return Err(Error::InsufficientZeros { requested: t, max_t: self.max_t() });
        }
        Ok(&self.ordinates[..self.count_up_to(t)])
    }
}

/// Main term `(T/2π)log(T/2π) − T/2π + 7/8` of the zero-counting function.
pub fn riemann_von_mangoldt(t: f64) -> f64 {
    let u = t / (2.0 * PI);
    u * u.ln() - u + 7.0 / 8.0
}

/// Closed or open σ-interval for selecting zeros by real part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaRange {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl SigmaRange {
    pub fn closed(lo: f64, hi: f64) -> Self {
        SigmaRange { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn contains(&self, s: f64) -> bool {
        let above = if self.lo_closed { s >= self.lo } else { s > self.lo };
        let below = if self.hi_closed { s <= self.hi } else { s < self.hi };
        above && below
    }
}

/// `x^ρ` for `ρ = 1/2 + iγ`.
fn power(x: f64, gamma: f64) -> Complex64 {
    Complex64::from_polar(x.sqrt(), gamma * x.ln())
}

/// `Σ_{ρ: |γ| ≤ T, Re ρ ∈ I} ((x + x/τ)^ρ − x^ρ)/ρ`, each ordinate paired
/// with its conjugate so the sum is real.
pub fn s_interval_sum(zeros: &ZeroSet, x: f64, tau: f64, t: f64, range: SigmaRange) -> Result<f64> {
    if !(tau > 0.0) || !(x > 0.0) {
        return Err(Error::InvalidArgument("need x > 0 and τ > 0".into()));
    }
    let gammas = zeros.up_to(t)?;
    if !range.contains(0.5) {
        return Ok(0.0);
    }
    let x2 = x + x / tau;
    let mut acc = Neumaier::default();
    for &g in gammas {
        let rho = Complex64::new(0.5, g);
        acc.add(2.0 * ((power(x2, g) - power(x, g)) / rho).re);
    }
    Ok(acc.value())
}

/// Truncated explicit formula
/// `x − Σ_{|γ| ≤ T} x^ρ/ρ − log 2π − log(1 − x⁻²)/2`.
pub fn explicit_formula_psi(zeros: &ZeroSet, x: f64, t: f64) -> Result<f64> {
    if !(x > 2.0) {
        return Err(Error::InvalidArgument("the explicit formula needs x > 2".into()));
    }
    let gammas = zeros.up_to(t)?;
    let mut acc = Neumaier::default();
    for &g in gammas {
        acc.add(2.0 * (power(x, g) / Complex64::new(0.5, g)).re);
    }
    Ok(x - acc.value() - (2.0 * PI).ln() - 0.5 * (1.0 - x.powi(-2)).ln())
}

// Ordinates are compared on a 10⁻⁹ grid so that window tests are exact.
const GRID: f64 = 1e9;
const WINDOW: i64 = 1_000_000_000;

fn count_within_sorted(v: &[i64]) -> u128 {
    // ordered pairs (i, j), i ≠ j, with |v_i − v_j| ≤ WINDOW
    let mut count = 0u128;
    let mut j = 0;
    for i in 0..v.len() {
        while v[i] - v[j] > WINDOW {
            j += 1;
        }
        count += (i - j) as u128;
    }
    2 * count + v.len() as u128
}

fn count_within_cross(a: &[i64], b: &[i64]) -> u128 {
    let (mut lo, mut hi) = (0, 0);
    let mut count = 0u128;
    for &x in a {
        while lo < b.len() && b[lo] < x - WINDOW {
            lo += 1;
        }
        while hi < b.len() && b[hi] <= x + WINDOW {
            hi += 1;
        }
        count += (hi.max(lo) - lo) as u128;
    }
    count
}

/// Number of ordered quadruples from `{±γ : γ ≤ T}` with
/// `|γ₁ + γ₂ − γ₃ − γ₄| ≤ 1`.
pub fn additive_energy(zeros: &ZeroSet, t: f64, cap: usize) -> Result<u128> {
    let n = zeros.count_up_to(t);
    if n > cap {
        return Err(Error::TooManyZeros { count: n, cap });
    }
    let signed: Vec<i64> = zeros.ordinates[..n]
        .iter()
        .flat_map(|&g| {
            let k = (g * GRID).round() as i64;
            [k, -k]
        })
        .collect();
    // unordered pair sums: the diagonal once, the rest with weight 2
    let mut diag: Vec<i64> = signed.iter().map(|&a| 2 * a).collect();
    let mut off: Vec<i64> = Vec::with_capacity(signed.len() * signed.len().saturating_sub(1) / 2);
    for (i, &a) in signed.iter().enumerate() {
        for &b in &signed[i + 1..] {
            off.push(a + b);
        }
    }
    diag.sort_unstable();
    off.sort_unstable();
    let dd = count_within_sorted(&diag);
    let oo = count_within_sorted(&off);
    let d_o = count_within_cross(&diag, &off);
    Ok(dd + 4 * d_o + 4 * oo)
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentEstimate {
    pub k: u32,
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub t_used: f64,
}

/// Monte Carlo average of `|S_[0,1](x)|^{2k}` over `x` uniform in
/// `[X, 2X]`, with `τ = x^{1−θ}` and `T = X^{1−θ}` capped at the data.
pub fn moment_statistic(zeros: &ZeroSet, x_start: f64, theta: f64, k: u32, samples: usize, seed: u64) -> Result<MomentEstimate> {
    if !(k == 1 || k == 2) || samples == 0 || !(x_start > 0.0) {
        return Err(Error::InvalidArgument("need k ∈ {1, 2}, samples ≥ 1 and X > 0".into()));
    }
    let t = x_start.powf(1.0 - theta).min(zeros.max_t());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let x = x_start * (1.0 + rng.random::<f64>());
        let s = s_interval_sum(zeros, x, x.powf(1.0 - theta), t, SigmaRange::closed(0.0, 1.0))?;
        values.push(s.abs().powi(2 * k as i32));
    }
    let mean = super::compensated_sum(values.iter().copied()) / samples as f64;
    let var = if samples > 1 {
        super::compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (samples - 1) as f64
    } else {
        0.0
    };
    Ok(MomentEstimate { k, mean, std_error: (var / samples as f64).sqrt(), samples, t_used: t })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_errors() {
        let z = parse_zeros("14.134725\n21.022040\n25.010858\n", "t").unwrap();
        assert_eq!(z.len(), 3);
        assert!((z.max_t() - 25.010858).abs() < 1e-12);
        assert!(matches!(parse_zeros("21.0\n14.1", "t"), Err(Error::ZerosOrder { line: 2 })));
        assert!(matches!(parse_zeros("14.1\nabc", "t"), Err(Error::ZerosParse { line: 2, .. })));
        assert!(matches!(parse_zeros("-3", "t"), Err(Error::ZerosParse { line: 1, .. })));
    }

    #[test]
    fn energy_of_single_ordinate() {
        let z = ZeroSet::from_ordinates(vec![14.13]).unwrap();
        assert_eq!(additive_energy(&z, 20.0, 10).unwrap(), 6);
        let empty = ZeroSet::from_ordinates(vec![]).unwrap();
        assert_eq!(additive_energy(&empty, 20.0, 10).unwrap(), 0);
        assert!(matches!(additive_energy(&z, 20.0, 0), Err(Error::TooManyZeros { .. })));
    }

    #[test]
    fn sums_outside_critical_line_vanish() {
        let z = bundled_zeros();
        let open = SigmaRange { lo: 0.6, hi: 0.9, lo_closed: false, hi_closed: true };
        assert_eq!(s_interval_sum(&z, 1e5, 10.0, 1000.0, open).unwrap(), 0.0);
        assert!(matches!(
            s_interval_sum(&z, 1e5, 10.0, 1e6, open),
            Err(Error::InsufficientZeros { .. })
        ));
    }

    #[test]
    fn empty_zero_set_moments() {
        let z = ZeroSet::from_ordinates(vec![]).unwrap();
        let m = moment_statistic(&z, 1e5, 0.6, 1, 10, 1).unwrap();
        assert_eq!(m.mean, 0.0);
    }
}
