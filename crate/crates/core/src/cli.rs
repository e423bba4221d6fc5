//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::empirical::{
    additive_energy, bundled_zeros, exceptional_measure, explicit_formula_psi, load_zeros, moment_statistic,
    riemann_von_mangoldt, LambdaSieve, ZeroSet, DEFAULT_ENERGY_CAP, DEFAULT_MAX_LIMIT,
};
use crate::error::{Error, Result};
use crate::exact::{parse_exact, BoundaryPoint, Rational};
use crate::mu::{mu_curve, mu_upper, MuBoundResult, MuOptions, DEFAULT_TOL};
use crate::piecewise::{ExtReal, PiecewiseBound};
use crate::tables::{a_table_with, astar_table_with, HypothesisMode, DEFAULT_PINTZ_MAX_N};
use crate::verify::run_claims;

/// Environment variable naming the default zeros file.
pub const ZEROS_ENV: &str = "MUBOUND_ZEROS";
pub const SCHEMA_VERSION: u32 = 1;
pub const CURVE_HEADER: &str = "theta,mu_upper,gap_exponent";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    A,
    Astar,
}

fn exact_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_exact(s).map_err(|e| e.to_string())
}

fn mode_arg(s: &str) -> std::result::Result<HypothesisMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "mubound", version, about = "Certified bounds for the exceptional-set exponent μ(θ)")]
pub struct Cli {
    /// Branch-and-bound tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Last instantiated Pintz family index.
    #[arg(long, global = true, default_value_t = DEFAULT_PINTZ_MAX_N)]
    pub sigma_cap_n: u32,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the majorant Ã(σ).
    EvalA {
        #[arg(long, value_parser = exact_arg)]
        sigma: Rational,
        #[arg(long, value_parser = mode_arg, default_value = "unconditional")]
        mode: HypothesisMode,
    },
    /// Evaluate the energy majorant Ã*(σ).
    EvalAstar {
        #[arg(long, value_parser = exact_arg)]
        sigma: Rational,
        #[arg(long, value_parser = mode_arg, default_value = "unconditional")]
        mode: HypothesisMode,
    },
    /// Certified upper bound for μ(θ).
    Mu {
        #[arg(long, value_parser = exact_arg)]
        theta: Rational,
        #[arg(long, value_parser = mode_arg, default_value = "unconditional")]
        mode: HypothesisMode,
        /// Use the second moment only.
        #[arg(long)]
        l2_only: bool,
    },
    /// μ bounds on a uniform θ grid of `steps + 1` points.
    Curve {
        #[arg(long, value_parser = exact_arg)]
        theta_min: Rational,
        #[arg(long, value_parser = exact_arg)]
        theta_max: Rational,
        #[arg(long)]
        steps: u32,
        #[arg(long, value_parser = mode_arg, default_value = "unconditional")]
        mode: HypothesisMode,
        #[arg(long)]
        l2_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Table pieces and a sampled curve.
    TableDump {
        #[arg(long, value_enum, default_value_t = Which::A)]
        which: Which,
        #[arg(long, value_parser = mode_arg, default_value = "unconditional")]
        mode: HypothesisMode,
        #[arg(long, default_value_t = 1000)]
        samples: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the claims ledger; exits 0 iff every claim passes.
    Verify {
        #[arg(long)]
        filter: Option<String>,
    },
    /// Desk-scale measurements.
    #[command(subcommand)]
    Empirical(Empirical),
}

#[derive(Debug, Subcommand)]
pub enum Empirical {
    /// Sieve Λ and report ψ.
    Sieve {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_LIMIT)]
        max_limit: u64,
        /// Report ψ at these points as well.
        #[arg(long, num_args = 1..)]
        at: Vec<f64>,
        /// Write a cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Read the sieve from a cache file instead of sieving.
        #[arg(long, conflicts_with = "cache")]
        load: Option<PathBuf>,
    },
    /// Exceptional-set scan over [X, 2X).
    Exceptional {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Zero count against the Riemann–von Mangoldt main term.
    ZerosCheck {
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long, default_value_t = 100.0)]
        t: f64,
    },
    /// Truncated explicit formula for ψ(x) against the sieve.
    ExplicitFormula {
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        t: f64,
    },
    /// Additive energy of the ordinates up to T.
    Energy {
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_ENERGY_CAP)]
        cap: usize,
    },
    /// Monte Carlo moments of the zero sum over [X, 2X].
    Moments {
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// JSON number for finite values, `"-inf"`/`"inf"` otherwise.
pub fn num(v: f64) -> Value {
    if v == f64::NEG_INFINITY {
        Value::from("-inf")
    } else if v == f64::INFINITY {
        Value::from("inf")
    } else {
        serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.to_string() }
}

fn csv_row(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().map(|s| csv_field(&s)).collect::<Vec<_>>().join(",")
}

fn render_record(record: &Map<String, Value>, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(record).expect("record serializes") + "\n",
        Format::Csv => format!(
            "{}\n{}\n",
            csv_row(record.keys().cloned()),
            csv_row(record.values().map(cell))
        ),
        Format::Human => {
            let width = record.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            record.iter().map(|(k, v)| format!("{k:<width$}  {}\n", cell(v))).collect()
        }
    }
}

fn record(fields: Vec<(&str, Value)>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA_VERSION));
    for (k, v) in fields {
        m.insert(k.into(), v);
    }
    m
}

fn ext_value(v: &ExtReal) -> (Value, Value) {
    match v {
        ExtReal::Finite(b) => (json!(b.to_string()), num(b.to_f64())),
        other => (json!(other.to_string()), num(other.to_f64())),
    }
}

fn eval_table(pw: &PiecewiseBound, sigma: &Rational, mode: HypothesisMode, table: &str) -> Result<Map<String, Value>> {
    let s = BoundaryPoint::from_rational(sigma.clone());
    let value = pw.evaluate_upper(&s)?;
    let refs: Vec<String> = pw
        .pieces_at(&s)
        .iter()
        .filter(|p| p.formula.eval_point(&s) == value)
        .map(|p| format!("{} on [{}, {}]", p.provenance, p.lo, p.hi))
        .collect();
    let (exact, approx) = ext_value(&value);
    Ok(record(vec![
        ("table", json!(table)),
        ("mode", json!(mode.name())),
        ("sigma", json!(sigma.to_string())),
        ("value", exact),
        ("value_f64", approx),
        ("row", json!(refs.join("; "))),
    ]))
}

/// Record fields mirroring [`MuBoundResult`].
pub fn mu_record(r: &MuBoundResult) -> Map<String, Value> {
    record(vec![
        ("theta", json!(r.theta.to_string())),
        ("theta_f64", num(r.theta.to_f64().unwrap_or(f64::NAN))),
        ("mode", json!(r.mode.name())),
        ("refined", json!(r.refined)),
        ("upper", num(r.upper)),
        ("lower", num(r.lower)),
        ("witness_sigma", r.witness_sigma.as_ref().map(|w| json!(w.to_string())).unwrap_or(Value::Null)),
        ("witness_sigma_f64", r.witness_sigma.as_ref().map(|w| num(w.to_f64())).unwrap_or(Value::Null)),
        ("active", json!(r.active.to_string())),
        ("gap_exponent", num(r.gap_exponent())),
        ("tol", num(r.tol)),
        ("nodes", json!(r.nodes)),
    ])
}

fn fmt_f64(v: f64) -> String {
    cell(&num(v))
}

fn options(cli: &Cli, l2_only: bool) -> MuOptions {
    let o = MuOptions { tol: cli.tol, pintz_max_n: cli.sigma_cap_n, ..Default::default() };
    if l2_only { o.l2_only() } else { o }
}

fn curve_text(points: &[crate::mu::CurvePoint], mode: HypothesisMode, refined: bool, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = format!("{CURVE_HEADER}\n");
            for p in points {
                let t = p.theta.to_f64().unwrap_or(f64::NAN);
                s.push_str(&format!("{},{},{}\n", fmt_f64(t), fmt_f64(p.mu_upper), fmt_f64(p.gap_exponent)));
            }
            s
        }
        Format::Json => {
            let pts: Vec<Value> = points.iter().map(|p| Value::Object(mu_record(&p.result))).collect();
            let doc = record(vec![("mode", json!(mode.name())), ("refined", json!(refined)), ("points", Value::Array(pts))]);
            serde_json::to_string_pretty(&doc).expect("curve serializes") + "\n"
        }
        Format::Human => {
            let mut s = format!("{:<12} {:<20} {:<20} {}\n", "theta", "mu_upper", "gap_exponent", "active");
            for p in points {
                s.push_str(&format!(
                    "{:<12} {:<20} {:<20} {}\n",
                    p.theta.to_string(),
                    fmt_f64(p.mu_upper),
                    fmt_f64(p.gap_exponent),
                    p.result.active
                ));
            }
            s
        }
    }
}

fn table_dump(pw: &PiecewiseBound, which: Which, mode: HypothesisMode, samples: u32, format: Format) -> Result<String> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let end = pw.end().rational_bounds(64).0;
    let sample_points: Vec<(f64, f64)> = (0..samples)
        .map(|k| {
            let s = &end * Rational::new(k.into(), samples.into());
            let v = pw.evaluate_upper(&BoundaryPoint::from_rational(s.clone()))?;
            Ok((s.to_f64().unwrap_or(f64::NAN), v.to_f64()))
        })
        .collect::<Result<_>>()?;
    let table = match which {
        Which::A => "A",
        Which::Astar => "A*",
    };
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("sigma,value\n");
            for (x, v) in sample_points {
                s.push_str(&format!("{},{}\n", fmt_f64(x), fmt_f64(v)));
            }
            s
        }
        Format::Json => {
            let pieces: Vec<Value> = pw
                .pieces()
                .iter()
                .map(|p| {
                    json!({
                        "lo": p.lo.to_string(),
                        "lo_f64": num(p.lo.to_f64()),
                        "hi": p.hi.to_string(),
                        "hi_f64": num(p.hi.to_f64()),
                        "formula": p.formula.to_string(),
                        "provenance": p.provenance,
                    })
                })
                .collect();
            let curve: Vec<Value> = sample_points.iter().map(|(x, v)| json!({"sigma": num(*x), "value": num(*v)})).collect();
            let doc = record(vec![
                ("table", json!(table)),
                ("mode", json!(mode.name())),
                ("pieces", Value::Array(pieces)),
                ("samples", Value::Array(curve)),
            ]);
            serde_json::to_string_pretty(&doc).expect("dump serializes") + "\n"
        }
        Format::Human => {
            let mut s = format!("{table} table, mode {}: {} pieces\n", mode.name(), pw.pieces().len());
            for p in pw.pieces() {
                s.push_str(&format!("[{}, {}]  {}  ({})\n", p.lo, p.hi, p.formula, p.provenance));
            }
            s
        }
    })
}

fn zeros_from(path: &Option<PathBuf>) -> Result<ZeroSet> {
    match path {
        Some(p) => load_zeros(p),
        None => match std::env::var_os(ZEROS_ENV) {
            Some(p) if !p.is_empty() => load_zeros(Path::new(&p)),
            _ => Ok(bundled_zeros()),
        },
    }
}

fn empirical(cmd: &Empirical, format: Format) -> Result<String> {
    let rec = match cmd {
        Empirical::Sieve { limit, max_limit, at, cache, load } => {
            let sieve = match load {
                Some(p) => LambdaSieve::read_cache(p)?,
                None => LambdaSieve::with_max(*limit, *max_limit)?,
            };
            if let Some(p) = cache {
                sieve.write_cache(p)?;
            }
            let mut fields = vec![
                ("limit", json!(sieve.limit())),
                ("psi_limit", num(sieve.psi(sieve.limit() as f64)?)),
            ];
            let values: Vec<Value> = at
                .iter()
                .map(|&t| Ok(json!({"t": num(t), "psi": num(sieve.psi(t)?)})))
                .collect::<Result<_>>()?;
            if !values.is_empty() {
                fields.push(("psi_at", Value::Array(values)));
            }
            record(fields)
        }
        Empirical::Exceptional { x, theta, delta, step } => {
            let limit = (2.0 * *x as f64 + (2.0 * *x as f64).powf(*theta)).ceil() as u64 + 1;
            let sieve = LambdaSieve::new(limit.max(2))?;
            let scan = exceptional_measure(&sieve, *x, *theta, *delta, *step)?;
            match serde_json::to_value(&scan).expect("scan serializes") {
                Value::Object(m) => {
                    let mut r = record(vec![]);
                    r.extend(m);
                    r
                }
                _ => unreachable!(),
            }
        }
        Empirical::ZerosCheck { zeros, t } => {
            let z = zeros_from(zeros)?;
            record(vec![
                ("source", json!(z.source())),
                ("count", json!(z.len())),
                ("max_t", num(z.max_t())),
                ("t", num(*t)),
                ("count_up_to_t", json!(z.count_up_to(*t))),
                ("riemann_von_mangoldt", num(riemann_von_mangoldt(*t))),
            ])
        }
        Empirical::ExplicitFormula { zeros, x, t } => {
            let z = zeros_from(zeros)?;
            let v = explicit_formula_psi(&z, *x, *t)?;
            let sieve = LambdaSieve::new((x.floor() as u64).max(2))?;
            let psi = sieve.psi(*x)?;
            record(vec![
                ("x", num(*x)),
                ("t", num(*t)),
                ("explicit_formula", num(v)),
                ("psi", num(psi)),
                ("error", num((v - psi).abs())),
            ])
        }
        Empirical::Energy { zeros, t, cap } => {
            let z = zeros_from(zeros)?;
            let e = additive_energy(&z, *t, *cap)?;
            record(vec![
                ("t", num(*t)),
                ("ordinates", json!(z.count_up_to(*t))),
                ("energy", json!(e.to_string())),
            ])
        }
        Empirical::Moments { zeros, x, theta, k, samples, seed } => {
            let z = zeros_from(zeros)?;
            let m = moment_statistic(&z, *x, *theta, *k, *samples, *seed)?;
            record(vec![
                ("x", num(*x)),
                ("theta", num(*theta)),
                ("k", json!(m.k)),
                ("samples", json!(m.samples)),
                ("seed", json!(seed)),
                ("t_used", num(m.t_used)),
                ("mean", num(m.mean)),
                ("std_error", num(m.std_error)),
            ])
        }
    };
    Ok(render_record(&rec, format))
}

fn write_out(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let format = cli.format;
    match &cli.command {
        Command::EvalA { sigma, mode } => {
            let pw = a_table_with(*mode, cli.sigma_cap_n)?;
            out.write_all(render_record(&eval_table(&pw, sigma, *mode, "A")?, format).as_bytes())?;
        }
        Command::EvalAstar { sigma, mode } => {
            let pw = astar_table_with(*mode, cli.sigma_cap_n)?;
            out.write_all(render_record(&eval_table(&pw, sigma, *mode, "A*")?, format).as_bytes())?;
        }
        Command::Mu { theta, mode, l2_only } => {
            let r = mu_upper(theta, *mode, &options(cli, *l2_only))?;
            out.write_all(render_record(&mu_record(&r), format).as_bytes())?;
        }
        Command::Curve { theta_min, theta_max, steps, mode, l2_only, out: path } => {
            let opts = options(cli, *l2_only);
            let points = mu_curve(theta_min, theta_max, *steps, *mode, &opts)?;
            write_out(out, path, &curve_text(&points, *mode, opts.refined, format))?;
        }
        Command::TableDump { which, mode, samples, out: path } => {
            let pw = match which {
                Which::A => a_table_with(*mode, cli.sigma_cap_n)?,
                Which::Astar => astar_table_with(*mode, cli.sigma_cap_n)?,
            };
            write_out(out, path, &table_dump(&pw, *which, *mode, *samples, format)?)?;
        }
        Command::Verify { filter } => {
            let report = run_claims(filter.as_deref());
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => {
                    let mut s = String::from("id,criterion,expected,computed,tolerance,pass\n");
                    for c in &report.claims {
                        s.push_str(&csv_row([
                            c.id.clone(),
                            c.criterion.to_string(),
                            c.expected.clone(),
                            c.computed.clone(),
                            c.tolerance.clone(),
                            c.pass.to_string(),
                        ]));
                        s.push('\n');
                    }
                    s
                }
                Format::Human => report.to_text(),
            };
            out.write_all(text.as_bytes())?;
            return Ok(report.exit_code());
        }
        Command::Empirical(cmd) => {
            out.write_all(empirical(cmd, format)?.as_bytes())?;
        }
    }
    Ok(0)
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if !(cli.tol > 0.0) {
        let _ = writeln!(err, "error: --tol must be positive");
        return 1;
    }
    if cli.sigma_cap_n < 6 {
        let _ = writeln!(err, "error: {}", Error::InvalidFamilyIndex(cli.sigma_cap_n));
        return 1;
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return 1;
        }
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
