//! Segmented sieve for the von Mangoldt function and cumulative ψ.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use super::Neumaier;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_LIMIT: u64 = 1_000_000_000;
const SEGMENT: usize = 1 << 18;
const MAGIC: &[u8; 4] = b"LAMS";
const VERSION: u8 = 1;

/// `Λ(n)` for `n ≤ limit`, stored as the prime base of each prime power
/// (zero elsewhere), together with the running sum `ψ(n)`.
#[derive(Clone, Debug)]
pub struct LambdaSieve {
    limit: u64,
    base: Vec<u32>,
    psi: Vec<f64>,
}

fn small_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn prime_bases(limit: u64) -> Vec<u32> {
    let primes = small_primes(isqrt(limit));
    let mut base = vec![0u32; limit as usize + 1];
    let mut lo = 2u64;
    let mut marks = vec![false; SEGMENT];
    while lo <= limit {
        let hi = (lo + SEGMENT as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        marks[..len].fill(false);
        for &p in &primes {
            if p * p > hi {
                break;
            }
            let mut m = (lo.div_ceil(p) * p).max(p * p);
            while m <= hi {
                marks[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &composite) in marks[..len].iter().enumerate() {
            if !composite {
                let n = lo + i as u64;
                base[n as usize] = n as u32;
            }
        }
        lo = hi + 1;
    }
    for &p in &primes {
        let mut q = p * p;
        while q <= limit {
            base[q as usize] = p as u32;
            q = match q.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    base
}

fn cumulative(base: &[u32]) -> Vec<f64> {
    let mut acc = Neumaier::default();
    base.iter()
        .map(|&b| {
            if b != 0 {
                acc.add((b as f64).ln());
            }
            acc.value()
        })
        .collect()
}

impl LambdaSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_max(limit, DEFAULT_MAX_LIMIT)
    }

    pub fn with_max(limit: u64, max: u64) -> Result<Self> {
        if limit > max || limit > u32::MAX as u64 {
            return Err(Error::LimitTooLarge { limit, max: max.min(u32::MAX as u64) });
        }
        if limit < 2 {
            return Err(Error::OutOfRange(format!("sieve limit {limit} must be at least 2")));
        }
        let base = prime_bases(limit);
        let psi = cumulative(&base);
        Ok(LambdaSieve { limit, base, psi })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `Λ(n)`, or zero outside `1..=limit`.
    pub fn lambda(&self, n: u64) -> f64 {
        match self.base.get(n as usize) {
            Some(&b) if b != 0 => (b as f64).ln(),
            _ => 0.0,
        }
    }

    /// The prime `p` when `n = p^k`.
    pub fn prime_base(&self, n: u64) -> Option<u64> {
        self.base.get(n as usize).filter(|&&b| b != 0).map(|&b| b as u64)
    }

    /// `ψ(t) = Σ_{n ≤ t} Λ(n)`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.limit as f64).contains(&t) {
            return Err(Error::OutOfRange(format!("ψ({t}) needs a sieve beyond {}", self.limit)));
        }
        Ok(self.psi[t.floor() as usize])
    }

    /// `Σ_{x < n ≤ x + y} Λ(n)`.
    pub fn interval_sum(&self, x: f64, y: f64) -> Result<f64> {
        if x < 0.0 || y < 0.0 || !(x + y).is_finite() {
            return Err(Error::OutOfRange(format!("interval ({x}, {x} + {y}] is not valid")));
        }
        if x + y > self.limit as f64 {
            return Err(Error::OutOfRange(format!("x + y = {} exceeds the sieve limit {}", x + y, self.limit)));
        }
        let (a, b) = (x.floor() as usize, (x + y).floor() as usize);
        Ok(self.psi[b] - self.psi[a])
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&[VERSION])?;
        w.write_all(&self.limit.to_le_bytes())?;
        for v in &self.psi {
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    /// Read a cache file. The prime bases are re-sieved and the stored ψ
    /// values must agree with them.
    pub fn read_cache(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut head = [0u8; 13];
        r.read_exact(&mut head).map_err(|_| Error::CacheFormat("truncated header".into()))?;
        if &head[..4] != MAGIC {
            return Err(Error::CacheFormat("bad magic bytes".into()));
        }
        if head[4] != VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {}", head[4])));
        }
        let limit = u64::from_le_bytes(head[5..13].try_into().unwrap());
        if !(2..=DEFAULT_MAX_LIMIT).contains(&limit) {
            return Err(Error::CacheFormat(format!("limit {limit} out of range")));
        }
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != (limit as usize + 1) * 8 {
            return Err(Error::CacheFormat("payload length does not match the limit".into()));
        }
        let psi: Vec<f64> = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        let sieve = Self::new(limit)?;
        if sieve.psi != psi {
            return Err(Error::CacheFormat("stored ψ values disagree with the sieve".into()));
        }
        Ok(sieve)
    }
}

/// Measure of `{x ∈ [X, 2X) : |Σ_{x<n≤x+y} Λ(n) − y| ≥ δy}`, `y = x^θ`,
/// sampled at `x = X + k·step`.
#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalScan {
    pub x_start: u64,
    pub theta: f64,
    pub delta: f64,
    pub step: f64,
    pub measure_estimate: f64,
    pub sample_count: u64,
    pub exceptional_count: u64,
    /// True unless the scan visits every integer.
    pub sampled: bool,
}

pub fn exceptional_measure(sieve: &LambdaSieve, x_start: u64, theta: f64, delta: f64, step: f64) -> Result<ExceptionalScan> {
    if !(step > 0.0) || !(0.0..=1.0).contains(&theta) || delta < 0.0 || x_start == 0 {
        return Err(Error::InvalidArgument("need X ≥ 1, step > 0, 0 ≤ θ ≤ 1, δ ≥ 0".into()));
    }
    let end = 2.0 * x_start as f64;
    if end + end.powf(theta) > sieve.limit() as f64 {
        return Err(Error::OutOfRange(format!("scan needs a sieve up to {}", end + end.powf(theta))));
    }
    let mut samples = 0u64;
    let mut bad = 0u64;
    loop {
        let x = x_start as f64 + samples as f64 * step;
        if x >= end {
            break;
        }
        let y = x.powf(theta);
        let s = sieve.interval_sum(x, y)?;
        if (s - y).abs() >= delta * y {
            bad += 1;
        }
        samples += 1;
    }
    Ok(ExceptionalScan {
        x_start,
        theta,
        delta,
        step,
        measure_estimate: step * bad as f64,
        sample_count: samples,
        exceptional_count: bad,
        sampled: step != 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let s = LambdaSieve::new(100).unwrap();
        assert_eq!(s.lambda(8), 2f64.ln());
        assert_eq!(s.lambda(12), 0.0);
        assert_eq!(s.lambda(1), 0.0);
        assert_eq!(s.lambda(97), 97f64.ln());
        assert_eq!(s.prime_base(81), Some(3));
    }

    #[test]
    fn limits_are_guarded() {
        assert!(matches!(LambdaSieve::with_max(1000, 100), Err(Error::LimitTooLarge { .. })));
        assert!(LambdaSieve::new(1).is_err());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lams.bin");
        let s = LambdaSieve::new(5000).unwrap();
        s.write_cache(&path).unwrap();
        let back = LambdaSieve::read_cache(&path).unwrap();
        assert_eq!(back.psi(5000.0).unwrap(), s.psi(5000.0).unwrap());
        std::fs::write(&path, b"LAMX\x01").unwrap();
        assert!(matches!(LambdaSieve::read_cache(&path), Err(Error::CacheFormat(_))));
    }

    #[test]
    fn interval_sum_range() {
        let s = LambdaSieve::new(100).unwrap();
        assert_eq!(s.interval_sum(10.0, 0.0).unwrap(), 0.0);
        assert!(matches!(s.interval_sum(90.0, 20.0), Err(Error::OutOfRange(_))));
    }
}
