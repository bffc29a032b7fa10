//! `capax`: ball-condenser capacities and the inequality suites built on them.

mod output;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use capax::bounds::{
    check_theorem21, monotone_functionals, vanishing_sweep, BoundReport, Functional,
    DEFAULT_TOL,
};
use capax::capacity::{ball_capacity, beta_n, global_capacity, Condenser, Exponent};
use capax::frequency::{frequency_report, RayleighSettings, DEFAULT_PROXY_ORDER};
use capax::geometry::{Dimension, Manifold, WarpProfile};
use capax::quadrature::QuadratureSettings;
use capax::verify::{run_suite, Check, Suite, SuiteSummary, VerifyConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use output::{emit, emit_json, sig12, versioned, Table};

/// A mathematical check failed.
const EXIT_CHECK: u8 = 1;
/// The invocation was invalid.
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "capax", version, about = "Relative p-capacities of ball condensers on rotationally symmetric manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Capacity of a ball condenser, or the global capacity of a ball.
    Capacity(CapacityArgs),
    /// Runs a property suite and prints one line per check.
    Verify(VerifyArgs),
    /// Tabulates a ratio, limit or proof functional over a grid.
    Sweep(SweepArgs),
    /// Frequency bounds of a ball.
    Frequency(FrequencyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ManifoldArgs {
    /// `euclidean`, `hyperbolic`, an inline JSON spec or a path to one.
    #[arg(long, default_value = "euclidean")]
    profile: String,
    /// Dimension, at least 2.
    #[arg(long, default_value_t = 3)]
    n: u32,
}

impl ManifoldArgs {
    fn manifold(&self) -> anyhow::Result<Manifold> {
        let profile = WarpProfile::from_arg(&self.profile)?;
        Ok(Manifold::new(profile, Dimension::new(self.n)?))
    }
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// Exponent: a positive real or `inf`.
    #[arg(long)]
    p: Exponent,
    /// Inner radius.
    #[arg(long)]
    r: f64,
    /// Outer radius.
    #[arg(long = "R", required_unless_present = "global", conflicts_with = "global")]
    big_r: Option<f64>,
    /// Infimum over all outer radii up to `--R-max`.
    #[arg(long, requires = "r_max")]
    global: bool,
    #[arg(long = "R-max")]
    r_max: Option<f64>,
    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, default_value_t = QuadratureSettings::default().rel_tol)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    CapacityOracle,
    Theorem21,
    Sharpness,
    Imbedding,
    Frequency,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::CapacityOracle => vec![Suite::CapacityOracle],
            SuiteArg::Theorem21 => vec![Suite::Theorem21],
            SuiteArg::Sharpness => vec![Suite::Sharpness],
            SuiteArg::Imbedding => vec![Suite::Imbedding],
            SuiteArg::Frequency => vec![Suite::Frequency],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Seed of the SplitMix64 stream behind the randomized cases.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inequality tolerance; overrides CAPAX_TOL.
    #[arg(long)]
    tol: Option<f64>,
    /// Randomized configurations of the theorem21 suite.
    #[arg(long, default_value_t = 500)]
    cases: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Vanishing,
    #[value(name = "sharpness-i")]
    SharpnessI,
    #[value(name = "sharpness-ii")]
    SharpnessIi,
    #[value(name = "sharpness-iii")]
    SharpnessIii,
    #[value(name = "functional-F")]
    FunctionalF,
    #[value(name = "functional-Fbar")]
    FunctionalFbar,
    #[value(name = "functional-Ftilde")]
    FunctionalFtilde,
    #[value(name = "limit-pinfty")]
    LimitPinfty,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    kind: SweepKind,
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// Exponent; defaults to `n` for the p = n kinds.
    #[arg(long)]
    p: Option<Exponent>,
    /// Volume weight of the alpha-ratios.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponential weight of the p = n ratios.
    #[arg(long)]
    beta: Option<f64>,
    /// Inner radius of `limit-pinfty`.
    #[arg(long)]
    r: Option<f64>,
    /// Outer radius.
    #[arg(long = "R")]
    big_r: Option<f64>,
    /// Inner radii, comma separated.
    #[arg(long = "r-grid", value_delimiter = ',')]
    r_grid: Vec<f64>,
    /// Outer radii of `functional-Ftilde`, comma separated.
    #[arg(long = "R-grid", value_delimiter = ',')]
    big_r_grid: Vec<f64>,
    /// Exponents of `limit-pinfty`, comma separated.
    #[arg(long = "p-grid", value_delimiter = ',')]
    p_grid: Vec<f64>,
    /// Inequality tolerance; overrides CAPAX_TOL.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct FrequencyArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// Exponent: at least 1, or `inf`.
    #[arg(long)]
    p: Exponent,
    #[arg(long = "R")]
    big_r: f64,
    /// Intervals of the Rayleigh oracle grid.
    #[arg(long, default_value_t = 1024)]
    grid: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Order of the `gamma_p^{1/p}` proxy at `p = inf`.
    #[arg(long, default_value_t = DEFAULT_PROXY_ORDER)]
    proxy_order: f64,
}

/// An error that maps to an exit code.
enum Failure {
    Usage(anyhow::Error),
    Check,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn tolerance(flag: Option<f64>) -> anyhow::Result<Option<f64>> {
    let tol = match flag {
        Some(t) => Some(t),
        None => match std::env::var("CAPAX_TOL") {
            Ok(s) => Some(s.trim().parse::<f64>().with_context(|| format!("CAPAX_TOL={s:?} is not a number"))?),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => bail!("CAPAX_TOL: {e}"),
        },
    };
    if let Some(t) = tol {
        if !(t >= 0.0) || !t.is_finite() {
            bail!("tolerance must be a nonnegative finite number, got {t}");
        }
    }
    Ok(tol)
}

fn quadrature(rel_tol: f64) -> anyhow::Result<QuadratureSettings> {
    let q = QuadratureSettings::default().with_rel_tol(rel_tol);
    q.validate()?;
    Ok(q)
}

fn cmd_capacity(args: CapacityArgs) -> Result<(), Failure> {
    let m = args.manifold.manifold()?;
    let q = quadrature(args.rel_tol)?;
    let body = if args.global {
        let r_max = args.r_max.ok_or_else(|| anyhow!("--global needs --R-max"))?;
        let g = global_capacity(&m, args.p, args.r, r_max, &q)?;
        json!({
            "capacity": g.value,
            "ln_capacity": g.ln_value,
            "regime": args.p.regime(),
            "global": true,
            "argmin": g.argmin,
            "attained": g.attained,
            "tail_fraction": g.tail_fraction,
            "quadrature_error": g.rel_error,
            "inputs": {"profile": m.profile().kind().name(), "n": m.dim().get(), "p": args.p, "r": args.r, "R_max": r_max},
        })
    } else {
        let big_r = args.big_r.ok_or_else(|| anyhow!("--R is required without --global"))?;
        let c = Condenser::new(args.r, big_r)?;
        let cap = ball_capacity(&m, args.p, c, &q)?;
        json!({
            "capacity": cap.value,
            "ln_capacity": cap.ln_value,
            "regime": cap.regime,
            "quadrature_error": cap.rel_error,
            "inputs": {"profile": m.profile().kind().name(), "n": m.dim().get(), "p": args.p, "r": args.r, "R": big_r},
        })
    };
    match args.format {
        Format::Json => emit_json(&versioned(&body)?)?,
        Format::Csv => {
            let mut t = Table::new(&["capacity", "ln_capacity", "regime", "quadrature_error"])?;
            let num = |k: &str| body[k].as_f64().map(sig12).unwrap_or_default();
            t.row([num("capacity"), num("ln_capacity"), body["regime"].as_str().unwrap_or("").to_string(), num("quadrature_error")])?;
            emit(&t.finish()?)?;
        }
    }
    Ok(())
}

fn check_row(c: &Check) -> Vec<String> {
    let cause = c.failure.map(|f| f.name()).unwrap_or("").to_string();
    match &c.report {
        Some(r) => vec![
            c.suite.name().into(),
            r.theorem_id.as_str().into(),
            c.label.clone(),
            sig12(r.lhs),
            sig12(r.rhs),
            serde_json::to_value(r.direction).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            sig12(r.margin),
            sig12(r.relative_margin),
            sig12(r.tolerance),
            sig12(r.rel_error),
            c.pass().to_string(),
            cause,
        ],
        None => vec![
            c.suite.name().into(),
            String::new(),
            format!("{}: {}", c.label, c.error.as_deref().unwrap_or("")),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            "false".into(),
            cause,
        ],
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let cfg = VerifyConfig {
        seed: args.seed,
        tol: tolerance(args.tol)?,
        theorem21_cases: args.cases,
        ..VerifyConfig::default()
    };
    let mut all = Vec::new();
    let mut summaries = Vec::new();
    for suite in args.suite.suites() {
        let checks = run_suite(suite, &cfg);
        summaries.push(SuiteSummary::from_checks(suite, &checks));
        all.extend(checks);
    }
    let failed = all.iter().filter(|c| !c.pass()).count();
    match args.format {
        Format::Json => emit_json(&versioned(&json!({
            "seed": cfg.seed,
            "tolerance": cfg.tol,
            "checks": all,
            "summary": summaries,
            "failed": failed,
        }))?)?,
        Format::Csv => {
            let mut t = Table::new(&[
                "suite", "theorem_id", "label", "lhs", "rhs", "direction", "margin",
                "relative_margin", "tolerance", "rel_error", "pass", "failure",
            ])?;
            for c in &all {
                t.row(check_row(c))?;
            }
            let mut s = Table::new(&["suite", "total", "passed", "tolerance_failures", "margin_failures", "errors"])?;
            for x in &summaries {
                s.row([
                    x.suite.name().to_string(),
                    x.total.to_string(),
                    x.passed.to_string(),
                    x.tolerance_failures.to_string(),
                    x.margin_failures.to_string(),
                    x.errors.to_string(),
                ])?;
            }
            let mut text = t.finish()?;
            text.push('\n');
            text += &s.finish()?;
            text.push('\n');
            if failed == 0 {
                text += &format!("all {} checks passed\n", all.len());
            } else {
                text += &format!("{failed} of {} checks failed:\n", all.len());
                for c in all.iter().filter(|c| !c.pass()) {
                    let cause = c.failure.map(|f| f.name()).unwrap_or("");
                    text += &format!("FAIL [{}] {} ({cause})\n", c.suite, c.label);
                }
            }
            emit(&text)?;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| anyhow!("sweep --kind {kind} needs {flag}"))
}

fn need_grid<'a>(grid: &'a [f64], flag: &str, kind: &str) -> anyhow::Result<&'a [f64]> {
    if grid.is_empty() {
        bail!("sweep --kind {kind} needs {flag}");
    }
    Ok(grid)
}

struct Sweep {
    header: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    pass: Vec<Option<bool>>,
}

fn bound_rows(reports: Vec<BoundReport>, r_grid: &[f64], reduced: bool) -> Sweep {
    let mut rows = Vec::new();
    let mut pass = Vec::new();
    for (r, rep) in r_grid.iter().zip(reports) {
        let lhs = if reduced { rep.reduced_lhs.unwrap_or(rep.lhs) } else { rep.lhs };
        let margin = lhs - rep.rhs;
        let scale = lhs.abs().max(rep.rhs.abs());
        rows.push(vec![*r, lhs, rep.rhs, lhs / rep.rhs, margin, margin / scale, rep.rel_error]);
        pass.push(Some(margin >= -rep.tolerance * scale));
    }
    Sweep {
        header: vec!["r", "lhs", "rhs", "ratio", "margin", "relative_margin", "rel_error", "pass"],
        rows,
        pass,
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let m = args.manifold.manifold()?;
    let q = QuadratureSettings::default();
    let tol = tolerance(args.tol)?.unwrap_or(DEFAULT_TOL);
    let n = m.n();
    let kind_name = args.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let kind = kind_name.as_str();
    let sweep = match args.kind {
        SweepKind::Vanishing => {
            let p = need(args.p, "--p", kind)?;
            let big_r = need(args.big_r, "--R", kind)?;
            let grid = need_grid(&args.r_grid, "--r-grid", kind)?;
            let weight = if p == Exponent::Finite(n) { args.beta } else { args.alpha };
            let samples = vanishing_sweep(&m, p, weight, big_r, grid, &q)?;
            Sweep {
                header: vec!["r", "ratio"],
                rows: samples.iter().map(|s| vec![s.r, s.ratio]).collect(),
                pass: vec![None; samples.len()],
            }
        }
        SweepKind::SharpnessI | SweepKind::SharpnessIi | SweepKind::SharpnessIii => {
            let p = match (args.kind, args.p) {
                (_, Some(p)) => p,
                (SweepKind::SharpnessIi, None) => Exponent::Finite(n),
                _ => need(None, "--p", kind)?,
            };
            let valid = match args.kind {
                SweepKind::SharpnessI => p.is_finite() && p.value() >= 1.0 && p.value() < n,
                SweepKind::SharpnessIi => p == Exponent::Finite(n),
                _ => p.value() > n,
            };
            if !valid {
                return Err(anyhow!("sweep --kind {kind} does not cover p = {p} with n = {n}").into());
            }
            let big_r = need(args.big_r, "--R", kind)?;
            let grid = need_grid(&args.r_grid, "--r-grid", kind)?;
            let weight = if args.kind == SweepKind::SharpnessIi { args.beta } else { None };
            let reports = grid
                .par_iter()
                .map(|&r| check_theorem21(&m, p, weight, Condenser::new(r, big_r)?, &q, tol))
                .collect::<capax::Result<Vec<_>>>()?;
            bound_rows(reports, grid, args.kind == SweepKind::SharpnessI)
        }
        SweepKind::FunctionalF | SweepKind::FunctionalFbar => {
            let (which, p) = if args.kind == SweepKind::FunctionalF {
                (Functional::F, need(args.p, "--p", kind)?)
            } else {
                (Functional::FBar, args.p.unwrap_or(Exponent::Finite(n)))
            };
            let big_r = need(args.big_r, "--R", kind)?;
            let grid = need_grid(&args.r_grid, "--r-grid", kind)?;
            let alpha = args.alpha.unwrap_or(1.0 - p.value() / n);
            let samples = monotone_functionals(&m, p, alpha, which, big_r, grid, &q)?;
            let nan = f64::NAN;
            if which == Functional::F {
                Sweep {
                    header: vec!["r", "F", "F_prime", "F_prime_scale", "G", "H"],
                    rows: samples
                        .iter()
                        .map(|s| vec![s.r, s.f.unwrap_or(nan), s.f_prime.unwrap_or(nan), s.f_prime_scale.unwrap_or(nan), s.g.unwrap_or(nan), s.h])
                        .collect(),
                    pass: vec![None; samples.len()],
                }
            } else {
                Sweep {
                    header: vec!["r", "F_bar", "H"],
                    rows: samples.iter().map(|s| vec![s.r, s.f_bar.unwrap_or(nan), s.h]).collect(),
                    pass: vec![None; samples.len()],
                }
            }
        }
        SweepKind::FunctionalFtilde => {
            let p = need(args.p, "--p", kind)?;
            let grid = need_grid(&args.big_r_grid, "--R-grid", kind)?;
            let samples = monotone_functionals(&m, p, 0.0, Functional::FTilde, grid[grid.len() - 1], grid, &q)?;
            Sweep {
                header: vec!["R", "F_tilde", "H"],
                rows: samples.iter().map(|s| vec![s.r, s.f_tilde.unwrap_or(f64::NAN), s.h]).collect(),
                pass: vec![None; samples.len()],
            }
        }
        SweepKind::LimitPinfty => {
            let r = need(args.r, "--r", kind)?;
            let big_r = need(args.big_r, "--R", kind)?;
            let grid = need_grid(&args.p_grid, "--p-grid", kind)?;
            let c = Condenser::new(r, big_r)?;
            let target = 1.0 / (big_r - r);
            let rows = grid
                .par_iter()
                .map(|&p| {
                    let exp = Exponent::new(p)?;
                    if exp.value() <= 1.0 || !exp.is_finite() {
                        return Err(capax::Error::Regime(format!("limit-pinfty needs 1 < p < inf, got {p}")));
                    }
                    let cap = ball_capacity(&m, exp, c, &q)?;
                    let root = (cap.ln_value / p).exp();
                    Ok(vec![p, cap.ln_value, root, target, (root - target) / target, cap.rel_error])
                })
                .collect::<capax::Result<Vec<_>>>()?;
            Sweep {
                header: vec!["p", "ln_capacity", "capacity_root", "target", "relative_gap", "rel_error"],
                pass: vec![None; rows.len()],
                rows,
            }
        }
    };

    let failed = sweep.pass.iter().filter(|p| **p == Some(false)).count();
    match args.format {
        Format::Csv => {
            let mut t = Table::new(&sweep.header)?;
            for (row, pass) in sweep.rows.iter().zip(&sweep.pass) {
                let mut fields: Vec<String> = row.iter().map(|x| sig12(*x)).collect();
                if let Some(p) = pass {
                    fields.push(p.to_string());
                }
                t.row(fields)?;
            }
            emit(&t.finish()?)?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = sweep
                .rows
                .iter()
                .zip(&sweep.pass)
                .map(|(row, pass)| {
                    let mut obj = serde_json::Map::new();
                    for (k, v) in sweep.header.iter().zip(row) {
                        obj.insert((*k).into(), json!(v));
                    }
                    if let Some(p) = pass {
                        obj.insert("pass".into(), json!(p));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            emit_json(&versioned(&json!({
                "kind": kind,
                "profile": m.profile().kind().name(),
                "n": m.dim().get(),
                "quadrature_rel_tol": q.rel_tol,
                "rows": rows,
            }))?)?;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_frequency(args: FrequencyArgs) -> Result<(), Failure> {
    if let Exponent::SubOne(_) = args.p {
        return Err(anyhow!("frequency requires p ≥ 1").into());
    }
    let m = args.manifold.manifold()?;
    let q = QuadratureSettings::default();
    let rayleigh = RayleighSettings {
        intervals: args.grid,
        seed: args.seed,
        ..RayleighSettings::default()
    };
    let report = frequency_report(&m, args.p, args.big_r, &q, &rayleigh, args.proxy_order)?;
    let mut body = versioned(&report)?;
    if let Some(obj) = body.as_object_mut() {
        obj.insert("oracle_intervals".into(), json!(rayleigh.intervals));
        obj.insert("beta_n".into(), json!(beta_n(&m)));
    }
    emit_json(&body)?;
    if report.sandwich_ok && report.bound_ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Capacity(a) => cmd_capacity(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Frequency(a) => cmd_frequency(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Check)) => ExitCode::from(EXIT_CHECK),
        Ok(Err(Failure::Usage(e))) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(_) => ExitCode::from(EXIT_USAGE),
    }
}
