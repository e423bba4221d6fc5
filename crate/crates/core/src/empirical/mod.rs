//! Desk-scale measurements: von Mangoldt sums over short intervals, the
//! exceptional set, and sums over zeta zeros.

mod sieve;
mod zeros;

pub use sieve::{exceptional_measure, ExceptionalScan, LambdaSieve, DEFAULT_MAX_LIMIT};
pub use zeros::{
    additive_energy, bundled_zeros, explicit_formula_psi, load_zeros, moment_statistic, parse_zeros,
    riemann_von_mangoldt, s_interval_sum, MomentEstimate, SigmaRange, ZeroSet, DEFAULT_ENERGY_CAP,
};

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }
}
