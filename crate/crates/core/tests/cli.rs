use std::process::{Command, Output};

use serde_json::Value;

fn mubound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubound")).args(args).env_remove("MUBOUND_ZEROS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn mu_record_for_the_headline_value() {
    let o = mubound(&["mu", "--theta", "17/30", "--mode", "unconditional", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["upper"].as_f64().unwrap() - 0.583333333).abs() < 1e-9);
    assert_eq!(v["active"], "L4");
    assert_eq!(v["witness_sigma"], "7/10");
    assert_eq!(v["theta"], "17/30");
    assert_eq!(v["schema"], 1);
}

#[test]
fn empty_region_serializes_as_minus_inf() {
    let o = mubound(&["mu", "--theta", "0.7", "--mode", "rh", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["upper"], "-inf");
    assert_eq!(v["active"], "EMPTY");
    let csv = stdout(&mubound(&["mu", "--theta", "0.7", "--mode", "rh", "--format", "csv"]));
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let upper = header.iter().position(|h| *h == "upper").unwrap();
    assert_eq!(row[upper], "-inf");
}

#[test]
fn curve_csv_contract() {
    let args = ["curve", "--theta-min", "0.01", "--theta-max", "0.99", "--steps", "98", "--format", "csv"];
    let o = mubound(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,mu_upper,gap_exponent");
    assert_eq!(lines.len(), 100);
    let mut prev = f64::NEG_INFINITY;
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 3);
        let theta: f64 = cols[0].parse().unwrap();
        assert!(theta > prev);
        prev = theta;
        let mu: f64 = cols[1].parse().unwrap();
        assert_eq!(mu.to_string(), cols[1]);
    }
    assert!(lines.last().unwrap().ends_with("-inf,-inf"));

    let mut threaded = vec!["--threads", "2"];
    threaded.extend(args);
    assert_eq!(mubound(&threaded).stdout, o.stdout);
    assert_eq!(mubound(&args).stdout, o.stdout);
}

#[test]
fn curve_to_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    let o = mubound(&[
        "curve", "--theta-min", "1/10", "--theta-max", "1/2", "--steps", "4", "--mode", "lh", "--format", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 5);
    assert_eq!(points[4]["theta"], "1/2");
}

#[test]
fn table_evaluation() {
    let v = json(&mubound(&["eval-astar", "--sigma", "7/10", "--format", "json"]));
    assert_eq!(v["value"], "235/39");
    let v = json(&mubound(&["eval-a", "--sigma", "0.76", "--mode", "unc", "--format", "json"]));
    assert_eq!(v["sigma"], "19/25");
    assert!(v["row"].as_str().unwrap().contains("Guth-Maynard"));
    let v = json(&mubound(&["eval-a", "--sigma", "3/4", "--mode", "rh", "--format", "json"]));
    assert_eq!(v["value"], "-inf");
}

#[test]
fn table_dump_formats() {
    let csv = stdout(&mubound(&["table-dump", "--which", "a", "--format", "csv", "--samples", "200"]));
    assert_eq!(csv.lines().next(), Some("sigma,value"));
    assert_eq!(csv.lines().count(), 201);
    let v = json(&mubound(&["table-dump", "--which", "astar", "--mode", "dh", "--format", "json"]));
    assert!(!v["pieces"].as_array().unwrap().is_empty());
    assert_eq!(v["samples"].as_array().unwrap().len(), 1000);
}

#[test]
fn exit_codes() {
    assert_eq!(mubound(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(mubound(&["mu", "--theta", "1/0"]).status.code(), Some(1));
    assert_eq!(mubound(&["mu", "--theta", "1/2", "--mode", "xx"]).status.code(), Some(1));
    assert_eq!(mubound(&["mu", "--theta", "1"]).status.code(), Some(2));
    assert_eq!(mubound(&["eval-a", "--sigma", "2"]).status.code(), Some(2));
    assert_eq!(mubound(&["empirical", "energy", "--t", "1000", "--cap", "10"]).status.code(), Some(2));
    assert_eq!(
        mubound(&["empirical", "zeros-check", "--zeros", "/nonexistent/zeros.txt"]).status.code(),
        Some(4)
    );
    assert_eq!(mubound(&["--help"]).status.code(), Some(0));
    let err = mubound::Error::NonConvergence { budget: 1, gap: 1.0 };
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn verify_filter() {
    let o = mubound(&["verify", "--filter", "mu-17", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["claims"].as_array().unwrap().len(), 1);
    assert_eq!(v["claims"][0]["id"], "mu-17-30");
    assert_eq!(v["claims"][0]["pass"], true);
    assert!(stdout(&mubound(&["verify", "--filter", "pintz"])).contains("PASS"));
}

#[test]
fn empirical_commands() {
    let v = json(&mubound(&["empirical", "sieve", "--limit", "100", "--format", "json"]));
    assert!((v["psi_limit"].as_f64().unwrap() - 94.045_311_229).abs() < 1e-6);

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("psi.bin");
    let c = cache.to_str().unwrap();
    assert_eq!(mubound(&["empirical", "sieve", "--limit", "5000", "--cache", c]).status.code(), Some(0));
    let back = json(&mubound(&["empirical", "sieve", "--limit", "5000", "--load", c, "--format", "json"]));
    assert_eq!(back["limit"], 5000);
    std::fs::write(&cache, b"nope").unwrap();
    assert_eq!(mubound(&["empirical", "sieve", "--limit", "5000", "--load", c]).status.code(), Some(4));

    let v = json(&mubound(&["empirical", "energy", "--t", "20", "--format", "json"]));
    assert_eq!(v["energy"], "6");
    let v = json(&mubound(&["empirical", "exceptional", "--x", "10000", "--theta", "0.7", "--delta", "0.5", "--format", "json"]));
    assert_eq!(v["measure_estimate"].as_f64(), Some(0.0));
    let v = json(&mubound(&["empirical", "explicit-formula", "--x", "1000", "--t", "1000", "--format", "json"]));
    assert!(v["error"].as_f64().unwrap() <= 5.0);
    let v = json(&mubound(&["empirical", "moments", "--x", "100000", "--theta", "0.6", "--k", "1", "--samples", "50", "--format", "json"]));
    assert!(v["mean"].as_f64().unwrap() > 0.0);
}

#[test]
fn zeros_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.txt");
    std::fs::write(&path, "14.134725\n21.022040\n25.010858\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mubound"))
        .args(["empirical", "zeros-check", "--t", "22", "--format", "json"])
        .env("MUBOUND_ZEROS", &path)
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 3);
    assert_eq!(v["count_up_to_t"], 2);
    let v = json(&mubound(&["empirical", "zeros-check", "--t", "100", "--format", "json"]));
    assert_eq!(v["count_up_to_t"], 29);
}
