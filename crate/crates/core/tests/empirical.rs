use mubound::empirical::*;
use mubound::Error;
use proptest::prelude::*;

fn trial_lambda(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (n as f64).ln()
}

#[test]
fn sieve_matches_trial_division() {
    let s = LambdaSieve::new(10_000).unwrap();
    for n in 1..=10_000 {
        assert_eq!(s.lambda(n), trial_lambda(n), "n = {n}");
    }
}

#[test]
fn psi_100_by_prime_powers() {
    let s = LambdaSieve::new(1000).unwrap();
    let direct: f64 = (2..=100u64).map(trial_lambda).sum();
    assert!((s.psi(100.0).unwrap() - direct).abs() < 1e-6);
    assert!((direct - 94.045).abs() < 1e-3);
    let ten_to_twenty = [11f64, 13.0, 2.0, 17.0, 19.0].iter().map(|v| v.ln()).sum::<f64>();
    assert!((s.interval_sum(10.0, 10.0).unwrap() - ten_to_twenty).abs() < 1e-12);
    assert_eq!(s.interval_sum(0.0, 1000.0).unwrap(), s.psi(1000.0).unwrap());
}

fn naive_exceptional(x0: u64, theta: f64, delta: f64) -> u64 {
    let mut bad = 0;
    for x in x0..2 * x0 {
        let y = (x as f64).powf(theta);
        let top = (x as f64 + y).floor() as u64;
        let s: f64 = (x + 1..=top).map(trial_lambda).sum();
        if (s - y).abs() >= delta * y {
            bad += 1;
        }
    }
    bad
}

#[test]
fn exceptional_set_scans() {
    let s = LambdaSieve::new(30_000).unwrap();
    let regular = exceptional_measure(&s, 10_000, 0.7, 0.5, 1.0).unwrap();
    assert_eq!(regular.measure_estimate, 0.0);
    assert!(!regular.sampled);
    let short = exceptional_measure(&s, 10_000, 0.2, 0.9, 1.0).unwrap();
    assert!(short.measure_estimate > 0.0);
    let everything = exceptional_measure(&s, 10_000, 0.5, 0.0, 1.0).unwrap();
    assert_eq!(everything.measure_estimate, 10_000.0);
    assert!(matches!(exceptional_measure(&s, 20_000, 0.5, 0.5, 1.0), Err(Error::OutOfRange(_))));
}

#[test]
fn exceptional_scan_matches_naive_rescan() {
    let s = LambdaSieve::new(10_000).unwrap();
    for (theta, delta) in [(0.3, 0.5), (0.5, 0.3), (0.2, 0.9)] {
        let scan = exceptional_measure(&s, 2000, theta, delta, 1.0).unwrap();
        assert_eq!(scan.exceptional_count, naive_exceptional(2000, theta, delta));
    }
}

#[test]
fn zeros_dataset_counts() {
    let z = bundled_zeros();
    assert_eq!(z.count_up_to(100.0), 29);
    assert!((riemann_von_mangoldt(100.0) - 29.002_343_587).abs() < 1e-8);
    assert!((z.ordinates()[0] - 14.134725142).abs() < 1e-9);
}

#[test]
fn zeros_file_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.txt");
    std::fs::write(&path, "14.134725\n21.022040\n25.010858\n").unwrap();
    assert_eq!(load_zeros(&path).unwrap().len(), 3);
    std::fs::write(&path, "21.0\n14.1\n").unwrap();
    assert!(matches!(load_zeros(&path), Err(Error::ZerosOrder { line: 2 })));
    assert!(matches!(load_zeros(&dir.path().join("missing")), Err(Error::Io(_))));
}

fn brute_energy(gammas: &[f64]) -> u64 {
    let v: Vec<f64> = gammas.iter().flat_map(|&g| [g, -g]).collect();
    let mut count = 0;
    for a in &v {
        for b in &v {
            for c in &v {
                for d in &v {
                    if (a + b - c - d).abs() <= 1.0 {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[test]
fn energy_matches_brute_force_on_prefixes() {
    let z = bundled_zeros();
    for n in 0..=30 {
        let prefix = z.prefix(n);
        let fast = additive_energy(&prefix, f64::MAX, DEFAULT_ENERGY_CAP).unwrap();
        assert_eq!(fast, brute_energy(prefix.ordinates()) as u128, "prefix {n}");
    }
}

#[test]
fn energy_grows_roughly_cubically() {
    let z = bundled_zeros();
    let e100 = additive_energy(&z, 100.0, DEFAULT_ENERGY_CAP).unwrap() as f64;
    let e200 = additive_energy(&z, 200.0, DEFAULT_ENERGY_CAP).unwrap() as f64;
    assert!(e200 / e100 > 8.0 / 16.0);
}

#[test]
fn explicit_formula_tracks_psi() {
    let z = bundled_zeros();
    let s = LambdaSieve::new(10_000).unwrap();
    let bare = explicit_formula_psi(&z, 1000.0, 10.0).unwrap();
    let expected = 1000.0 - (2.0 * std::f64::consts::PI).ln() - 0.5 * (1.0 - 1e-6f64).ln();
    assert!((bare - expected).abs() < 1e-9);

    let err = |x: f64, t: f64| (explicit_formula_psi(&z, x, t).unwrap() - s.psi(x).unwrap()).abs();
    assert!(err(1000.0, 1000.0) <= 5.0);
    assert!(err(10_000.0, 5000.0) <= err(10_000.0, 50.0));
    for x in [1e3, 1e4] {
        for t in [1e2, 1e3] {
            assert!(err(x, t) <= 10.0 * x * x.ln().powi(2) / t, "x = {x}, T = {t}");
        }
    }
}

#[test]
fn s_sum_agrees_with_sieve() {
    let z = bundled_zeros();
    let s = LambdaSieve::new(300_000).unwrap();
    let x: f64 = 1e5;
    let tau = x.powf(0.4);
    let via_zeros = s_interval_sum(&z, x, tau, 1000.0, SigmaRange::closed(0.0, 1.0)).unwrap();
    let via_sieve = s.interval_sum(x, x / tau).unwrap() - x / tau;
    // the zero sum carries the opposite sign of the short-interval deviation
    assert!((via_zeros + via_sieve).abs() <= 0.1 * x * x.ln().powi(2) / 1000.0);
}

#[test]
fn moments_are_consistent() {
    let z = bundled_zeros();
    let m1 = moment_statistic(&z, 100_000.0, 0.6, 1, 200, 7).unwrap();
    let m2 = moment_statistic(&z, 100_000.0, 0.6, 2, 200, 7).unwrap();
    assert!(m1.mean > 0.0 && m1.mean.is_finite());
    assert!(m2.mean >= m1.mean * m1.mean - 3.0 * m2.std_error);
    let again = moment_statistic(&z, 100_000.0, 0.6, 1, 200, 7).unwrap();
    assert_eq!(again.mean.to_bits(), m1.mean.to_bits());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_sum_is_additive(x in 0.0f64..5000.0, y1 in 0.0f64..2000.0, y2 in 0.0f64..2000.0) {
        let s = LambdaSieve::new(10_000).unwrap();
        let whole = s.interval_sum(x, y1 + y2).unwrap();
        let parts = s.interval_sum(x, y1).unwrap() + s.interval_sum(x + y1, y2).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-9 * whole.abs().max(1.0));
    }

    #[test]
    fn conjugate_pairing_is_real(x in 1e3f64..1e6, theta in 0.1f64..0.9) {
        let z = bundled_zeros();
        let v = s_interval_sum(&z, x, x.powf(1.0 - theta), 500.0, SigmaRange::closed(0.0, 1.0)).unwrap();
        prop_assert!(v.is_finite());
    }
}
