//! Property suites run by `capax verify`: oracle agreement, randomized bound
//! checks, sharpness limits, imbeddings and frequencies.
//!
//! Cases run in parallel; results come back in case order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    self, check_theorem21, global_isocapacitary_check, monotone_functionals, BoundInputs,
    BoundReport, Direction, Functional, TheoremId,
};
use crate::capacity::{ball_capacity, beta_n, global_capacity, Condenser, Exponent};
use crate::error::{Error, Result};
use crate::frequency::{
    frequency_report, mazya_constant, rayleigh_oracle, RayleighSettings, DEFAULT_PROXY_ORDER,
};
use crate::geometry::{Dimension, Manifold, WarpProfile};
use crate::imbedding::{imbedding_report, make_extremal, RadialKind};
use crate::oracle::{discrete_condenser_energy, euclidean_closed_form};
use crate::quadrature::QuadratureSettings;

/// Inequality tolerance of the imbedding checks.
pub const IMBEDDING_TOL: f64 = 1e-6;

/// A named property suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    CapacityOracle,
    Theorem21,
    Sharpness,
    Imbedding,
    Frequency,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::CapacityOracle,
        Suite::Theorem21,
        Suite::Sharpness,
        Suite::Imbedding,
        Suite::Frequency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CapacityOracle => "capacity-oracle",
            Suite::Theorem21 => "theorem21",
            Suite::Sharpness => "sharpness",
            Suite::Imbedding => "imbedding",
            Suite::Frequency => "frequency",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Knobs of a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replaces the default tolerance of every inequality check.
    pub tol: Option<f64>,
    pub theorem21_cases: usize,
    pub imbedding_cases: usize,
    pub oracle_intervals: usize,
    pub quadrature: QuadratureSettings,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tol: None,
            theorem21_cases: 500,
            imbedding_cases: 200,
            oracle_intervals: 4096,
            quadrature: QuadratureSettings::default(),
        }
    }
}

impl VerifyConfig {
    fn inequality_tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Why a check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureCause {
    /// The margin is within the default tolerance; only a tightened tolerance rejects it.
    Tolerance,
    /// The inequality is violated beyond the default tolerance.
    Margin,
    /// The computation itself failed.
    Error,
}

impl FailureCause {
    pub fn name(self) -> &'static str {
        match self {
            FailureCause::Tolerance => "tolerance",
            FailureCause::Margin => "margin",
            FailureCause::Error => "error",
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureCause>,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.failure.is_none()
    }
}

/// Pass/fail counts of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub total: usize,
    pub passed: usize,
    pub tolerance_failures: usize,
    pub margin_failures: usize,
    pub errors: usize,
}

impl SuiteSummary {
    pub fn from_checks(suite: Suite, checks: &[Check]) -> Self {
        let count = |cause| checks.iter().filter(|c| c.failure == Some(cause)).count();
        Self {
            suite,
            total: checks.len(),
            passed: checks.iter().filter(|c| c.pass()).count(),
            tolerance_failures: count(FailureCause::Tolerance),
            margin_failures: count(FailureCause::Margin),
            errors: count(FailureCause::Error),
        }
    }
}

/// How a report is judged.
#[derive(Debug, Clone, Copy)]
enum Rule {
    /// An inequality with this default tolerance, replaced by `VerifyConfig::tol`.
    Inequality(f64),
    /// A fixed accuracy threshold, already encoded in the report.
    Threshold,
    /// An inequality that must hold with a positive margin.
    Strict,
}

struct Pending {
    label: String,
    outcome: Result<BoundReport>,
    rule: Rule,
}

fn pending(label: impl Into<String>, outcome: Result<BoundReport>, rule: Rule) -> Pending {
    Pending {
        label: label.into(),
        outcome,
        rule,
    }
}

fn judge(suite: Suite, p: Pending) -> Check {
    match p.outcome {
        Err(e) => Check {
            suite,
            label: p.label,
            report: None,
            error: Some(e.to_string()),
            failure: Some(FailureCause::Error),
        },
        Ok(mut report) => {
            if let Rule::Strict = p.rule {
                report.pass = report.pass && report.margin > 0.0;
            }
            let failure = (!report.pass).then(|| match p.rule {
                Rule::Inequality(default) => {
                    let scale = report.lhs.abs().max(report.rhs.abs());
                    if report.margin.is_finite() && report.margin >= -default * scale {
                        FailureCause::Tolerance
                    } else {
                        FailureCause::Margin
                    }
                }
                Rule::Threshold | Rule::Strict => FailureCause::Margin,
            });
            Check {
                suite,
                label: p.label,
                report: Some(report),
                error: None,
                failure,
            }
        }
    }
}

type Case<'a> = Box<dyn Fn() -> Vec<Pending> + Send + Sync + 'a>;

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    let cases: Vec<Case<'_>> = match suite {
        Suite::CapacityOracle => capacity_oracle_cases(cfg),
        Suite::Theorem21 => theorem21_cases(cfg),
        Suite::Sharpness => sharpness_cases(cfg),
        Suite::Imbedding => imbedding_cases(cfg),
        Suite::Frequency => frequency_cases(cfg),
    };
    cases
        .par_iter()
        .map(|case| case())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .map(|p| judge(suite, p))
        .collect()
}

/// `lhs <= threshold`, with `lhs` a nonnegative discrepancy.
fn threshold(id: TheoremId, inputs: BoundInputs, discrepancy: f64, limit: f64) -> BoundReport {
    BoundReport::new(id, inputs, discrepancy, limit, Direction::AtMost, 0.0)
}

trait OuterRadius {
    fn outer(self, big_r: f64) -> Self;
}

impl OuterRadius for BoundInputs {
    fn outer(mut self, big_r: f64) -> Self {
        self.big_r = Some(big_r);
        self
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn builtin(name: &str, n: u32) -> Result<Manifold> {
    match name {
        "euclidean" => Manifold::euclidean(n),
        _ => Manifold::hyperbolic(n),
    }
}

const BUILTINS: [&str; 2] = ["euclidean", "hyperbolic"];

fn capacity_oracle_cases(cfg: &VerifyConfig) -> Vec<Case<'_>> {
    let mut cases: Vec<Case<'_>> = Vec::new();
    for profile in BUILTINS {
        for n in [2u32, 3, 4] {
            for p in [1.5, 2.0, 3.0, 7.0] {
                for (r, big_r) in [(0.25, 1.0), (0.5, 2.0)] {
                    cases.push(Box::new(move || {
                        let label = format!("{profile} n={n} p={p} r={r} R={big_r}");
                        let run = || -> Result<Vec<Pending>> {
                            let m = builtin(profile, n)?;
                            let c = Condenser::new(r, big_r)?;
                            let exp = Exponent::Finite(p);
                            let inputs = BoundInputs::new(&m, exp).radii(r, big_r);
                            let quad = ball_capacity(&m, exp, c, &cfg.quadrature)?;
                            let disc = discrete_condenser_energy(&m, p, c, cfg.oracle_intervals)?;
                            let mut out = vec![
                                pending(
                                    format!("{label} oracle gap"),
                                    Ok(threshold(
                                        TheoremId::CapacityOracle,
                                        inputs.clone(),
                                        rel_gap(disc.energy, quad.value),
                                        1e-3,
                                    )
                                    .with_rel_error(quad.rel_error)),
                                    Rule::Threshold,
                                ),
                                pending(
                                    format!("{label} discrete energy above"),
                                    Ok(BoundReport::new(
                                        TheoremId::CapacityOracle,
                                        inputs.clone(),
                                        disc.energy,
                                        quad.value,
                                        Direction::AtLeast,
                                        1e-12 / quad.value.max(1e-300),
                                    )),
                                    Rule::Threshold,
                                ),
                            ];
                            if profile == "euclidean" {
                                let closed = euclidean_closed_form(m.dim(), exp, r, big_r)?;
                                out.push(pending(
                                    format!("{label} closed form"),
                                    Ok(threshold(
                                        TheoremId::CapacityOracle,
                                        inputs,
                                        rel_gap(quad.value, closed),
                                        1e-9,
                                    )),
                                    Rule::Threshold,
                                ));
                            }
                            Ok(out)
                        };
                        run().unwrap_or_else(|e| vec![pending(label, Err(e), Rule::Threshold)])
                    }));
                }
            }
        }
    }
    cases
}

/// A randomized regime-valid configuration for the bound checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem21Config {
    pub profile: String,
    pub c3: Option<f64>,
    pub n: u32,
    pub p: Exponent,
    pub weight: Option<f64>,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
}

impl Theorem21Config {
    pub fn manifold(&self) -> Result<Manifold> {
        let profile = match self.c3 {
            Some(c3) => WarpProfile::odd_series(vec![c3])?,
            None if self.profile == "euclidean" => WarpProfile::euclidean(),
            None => WarpProfile::hyperbolic(),
        };
        Ok(Manifold::new(profile, Dimension::new(self.n)?))
    }

    fn label(&self) -> String {
        let mut s = format!("{}", self.profile);
        if let Some(c3) = self.c3 {
            s += &format!("[c3={c3:.6}]");
        }
        s += &format!(" n={} p={}", self.n, self.p);
        if let Some(w) = self.weight {
            s += &format!(" weight={w:.6}");
        }
        s + &format!(" r={:.6} R={:.6}", self.r, self.big_r)
    }
}

/// Draws the randomized configurations of the bound suite from a SplitMix64 stream.
pub fn theorem21_configs(seed: u64, count: usize) -> Vec<Theorem21Config> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (profile, c3) = match rng.random_range(0..3u32) {
                0 => ("euclidean", None),
                1 => ("hyperbolic", None),
                _ => ("odd-series", Some(rng.random_range(0.0..1.0))),
            };
            let n = rng.random_range(2..=5u32);
            let nf = n as f64;
            let (p, weight) = match rng.random_range(0..5u32) {
                0 => (Exponent::One, Some(rng.random_range(1.0 - 1.0 / nf..=2.0))),
                1 => {
                    let p = rng.random_range(1.01..nf - 0.01);
                    (Exponent::Finite(p), Some(rng.random_range(1.0 - p / nf..=2.0)))
                }
                2 => {
                    let bn = beta_for(n).unwrap_or(1.0);
                    (Exponent::Finite(nf), Some(bn * rng.random_range(0.05..=1.0)))
                }
                3 => (Exponent::Finite(rng.random_range(nf + 0.01..nf + 6.0)), None),
                _ => (Exponent::Infinity, None),
            };
            let big_r = rng.random_range(0.05..=5.0);
            let r = big_r * rng.random_range(0.01..0.99);
            Theorem21Config {
                profile: profile.to_string(),
                c3,
                n,
                p,
                weight,
                r,
                big_r,
            }
        })
        .collect()
}

fn theorem21_cases(cfg: &VerifyConfig) -> Vec<Case<'_>> {
    let tol = cfg.inequality_tol(bounds::DEFAULT_TOL);
    theorem21_configs(cfg.seed, cfg.theorem21_cases)
        .into_iter()
        .map(|c| -> Case<'_> {
            Box::new(move || {
                let outcome = c.manifold().and_then(|m| {
                    check_theorem21(&m, c.p, c.weight, Condenser::new(c.r, c.big_r)?, &cfg.quadrature, tol)
                });
                vec![pending(c.label(), outcome, Rule::Inequality(bounds::DEFAULT_TOL))]
            })
        })
        .collect()
}

fn sharpness_cases(cfg: &VerifyConfig) -> Vec<Case<'_>> {
    let q = cfg.quadrature;
    let tol = cfg.inequality_tol(bounds::DEFAULT_TOL);
    let ineq = Rule::Inequality(bounds::DEFAULT_TOL);
    let mut cases: Vec<Case<'_>> = Vec::new();

    // case (i) at the critical weight, r -> 0
    for profile in BUILTINS {
        for p in [1.5, 2.0] {
            cases.push(Box::new(move || {
                let label = format!("{profile} n=3 p={p} r=1e-3 R=1 case i");
                let run = || -> Result<Vec<Pending>> {
                    let m = builtin(profile, 3)?;
                    let exp = Exponent::Finite(p);
                    let report = check_theorem21(&m, exp, None, Condenser::new(1e-3, 1.0)?, &q, tol)?;
                    let ratio = report.reduced_lhs.unwrap_or(report.lhs) / report.rhs;
                    let limit = threshold(TheoremId::T21i, report.inputs.clone(), ratio - 1.0, 0.01);
                    Ok(vec![
                        pending(format!("{label} bound"), Ok(report), ineq),
                        pending(format!("{label} ratio within 1%"), Ok(limit), Rule::Threshold),
                    ])
                };
                run().unwrap_or_else(|e| vec![pending(label, Err(e), ineq)])
            }));
        }
    }

    // case (ii): Euclidean identity and the r -> R limit
    for r in [0.1, 0.3, 0.5, 0.9] {
        cases.push(Box::new(move || {
            let label = format!("euclidean n=3 p=3 r={r} R=1 case ii identity");
            let outcome = Manifold::euclidean(3).and_then(|m| {
                let rep = check_theorem21(&m, Exponent::Finite(3.0), None, Condenser::new(r, 1.0)?, &q, tol)?;
                Ok(threshold(TheoremId::T21ii, rep.inputs.clone(), rel_gap(rep.lhs, rep.rhs), 1e-8))
            });
            vec![pending(label, outcome, Rule::Threshold)]
        }));
    }
    for n in [2u32, 3] {
        cases.push(Box::new(move || {
            let label = format!("hyperbolic n={n} p={n} r=0.999 R=1 case ii");
            let run = || -> Result<Vec<Pending>> {
                let m = Manifold::hyperbolic(n)?;
                let rep = check_theorem21(&m, Exponent::Finite(n as f64), None, Condenser::new(0.999, 1.0)?, &q, tol)?;
                let limit = threshold(TheoremId::T21ii, rep.inputs.clone(), rel_gap(rep.lhs, rep.rhs), 0.01);
                Ok(vec![
                    pending(format!("{label} bound"), Ok(rep), ineq),
                    pending(format!("{label} ratio within 1%"), Ok(limit), Rule::Threshold),
                ])
            };
            run().unwrap_or_else(|e| vec![pending(label, Err(e), ineq)])
        }));
    }

    // cases (iii) and (iv) for the point condenser of a small ball
    for profile in BUILTINS {
        for p in [Exponent::Finite(4.0), Exponent::Infinity] {
            cases.push(Box::new(move || {
                let label = format!("{profile} n=3 p={p} r=0 R=1e-2");
                let run = || -> Result<Vec<Pending>> {
                    let m = builtin(profile, 3)?;
                    let rep = check_theorem21(&m, p, None, Condenser::new(0.0, 1e-2)?, &q, tol)?;
                    let limit = threshold(rep.theorem_id, rep.inputs.clone(), rel_gap(rep.lhs, rep.rhs), 0.01);
                    Ok(vec![
                        pending(format!("{label} bound"), Ok(rep), ineq),
                        pending(format!("{label} ratio within 1%"), Ok(limit), Rule::Threshold),
                    ])
                };
                run().unwrap_or_else(|e| vec![pending(label, Err(e), ineq)])
            }));
        }
    }

    // global inequalities
    cases.push(Box::new(move || {
        let run = || -> Result<Vec<Pending>> {
            let far = |n| -> Result<Manifold> {
                Ok(Manifold::new(WarpProfile::euclidean().with_t_max(2e6)?, Dimension::new(n)?))
            };
            let e3 = far(3)?;
            let iso = global_isocapacitary_check(&e3, Exponent::One, 0.5, 1e4, &q, tol)?;
            let iso_eq = threshold(iso.theorem_id, iso.inputs.clone(), rel_gap(iso.lhs, iso.rhs), 1e-9);
            let cn = global_isocapacitary_check(&e3, Exponent::Finite(3.0), 0.5, 1e4, &q, tol)?;
            let cn_eq = threshold(cn.theorem_id, cn.inputs.clone(), rel_gap(cn.lhs, cn.rhs), 1e-9);
            let e2 = far(2)?;
            let g = global_capacity(&e2, Exponent::Finite(3.0), 0.7, 1e6, &q)?;
            let target = std::f64::consts::PI.powf(1.5) / 2.0;
            let inputs = BoundInputs::new(&e2, Exponent::Finite(3.0)).radii(0.7, 1e6);
            let limit = threshold(TheoremId::GlobalIsocap, inputs, rel_gap(g.value, target), 0.01)
                .with_rel_error(g.rel_error);
            Ok(vec![
                pending("euclidean n=3 p=1 r=0.5 isoperimetric", Ok(iso), ineq),
                pending("euclidean n=3 p=1 r=0.5 isoperimetric equality", Ok(iso_eq), Rule::Threshold),
                pending("euclidean n=3 p=3 r=0.5 global", Ok(cn), ineq),
                pending("euclidean n=3 p=3 r=0.5 global identity", Ok(cn_eq), Rule::Threshold),
                pending("euclidean n=2 p=3 r=0.7 global limit", Ok(limit), Rule::Threshold),
            ])
        };
        run().unwrap_or_else(|e| vec![pending("euclidean global", Err(e), ineq)])
    }));
    for p in [Exponent::One, Exponent::Finite(2.0), Exponent::Finite(3.0), Exponent::Finite(4.0), Exponent::Infinity] {
        cases.push(Box::new(move || {
            let label = format!("hyperbolic n=3 p={p} r=0.1 global");
            // p = n reduces to |B_r| / |B_r|
            let rule = if p == Exponent::Finite(3.0) { ineq } else { Rule::Strict };
            let outcome = Manifold::hyperbolic(3)
                .and_then(|m| global_isocapacitary_check(&m, p, 0.1, 20.0, &q, tol));
            vec![pending(label, outcome, rule)]
        }));
    }

    // Euclidean equality cases of the proof functionals
    cases.push(Box::new(move || {
        let grid: Vec<f64> = (1..=100).map(|i| 0.009 * i as f64).collect();
        let run = || -> Result<Vec<Pending>> {
            let e2 = Manifold::euclidean(2)?;
            let fbar = monotone_functionals(&e2, Exponent::Finite(2.0), 0.0, Functional::FBar, 1.0, &grid, &q)?;
            let worst_bar = fbar
                .iter()
                .filter_map(|s| s.f_bar)
                .map(|v| rel_gap(v, 0.5))
                .fold(0.0, f64::max);
            let outer: Vec<f64> = (1..=100).map(|i| 0.05 * i as f64).collect();
            let ftilde = monotone_functionals(&e2, Exponent::Finite(3.0), 0.0, Functional::FTilde, 1.0, &outer, &q)?;
            let target = bounds::f_tilde_zero_closed_form(e2.dim(), 3.0);
            let worst_tilde = ftilde
                .iter()
                .filter_map(|s| s.f_tilde)
                .map(|v| rel_gap(v, target))
                .fold(0.0, f64::max);
            Ok(vec![
                pending(
                    "euclidean n=2 R=1 F-bar constant 1/2",
                    Ok(threshold(TheoremId::T21ii, BoundInputs::new(&e2, Exponent::Finite(2.0)), worst_bar, 1e-9)),
                    Rule::Threshold,
                ),
                pending(
                    "euclidean n=2 p=3 F-tilde constant",
                    Ok(threshold(TheoremId::T21iii, BoundInputs::new(&e2, Exponent::Finite(3.0)), worst_tilde, 1e-9)),
                    Rule::Threshold,
                ),
            ])
        };
        run().unwrap_or_else(|e| vec![pending("functionals", Err(e), Rule::Threshold)])
    }));
    cases
}

fn random_samples(rng: &mut SplitMix64) -> (Vec<[f64; 2]>, f64) {
    let support = rng.random_range(0.3..3.0);
    let knots = rng.random_range(1..=6usize);
    let mut ts: Vec<f64> = (0..knots).map(|_| rng.random_range(0.0..support)).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut values: Vec<f64> = (0..ts.len()).map(|_| rng.random_range(0.0..1.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let mut samples = vec![[0.0, 1.0]];
    for (t, v) in ts.into_iter().zip(values) {
        if t > 0.0 {
            samples.push([t, v]);
        }
    }
    samples.push([support, 0.0]);
    (samples, support)
}

fn imbedding_cases(cfg: &VerifyConfig) -> Vec<Case<'_>> {
    let q = cfg.quadrature;
    let tol = cfg.inequality_tol(IMBEDDING_TOL);
    let ineq = Rule::Inequality(IMBEDDING_TOL);
    let mut cases: Vec<Case<'_>> = Vec::new();

    let equality = |label: String, n: u32, p: Exponent, kind: RadialKind, omega: Option<f64>, within: f64| -> Case<'_> {
        Box::new(move || {
            let run = || -> Result<Vec<Pending>> {
                let m = Manifold::euclidean(n)?;
                let u = make_extremal(kind.clone(), &m, &q)?;
                let rep = imbedding_report(&u, &m, p, omega, &q, tol)?;
                let eq = threshold(rep.theorem_id, rep.inputs.clone(), rel_gap(rep.lhs, rep.rhs), within);
                Ok(vec![
                    pending(format!("{label} bound"), Ok(rep), ineq),
                    pending(format!("{label} equality"), Ok(eq), Rule::Threshold),
                ])
            };
            run().unwrap_or_else(|e| vec![pending(label.clone(), Err(e), ineq)])
        })
    };
    for (n, p) in [(3u32, 2.0), (4, 2.0), (5, 3.0)] {
        cases.push(equality(
            format!("euclidean_power n={n} p={p} r=1"),
            n,
            Exponent::Finite(p),
            RadialKind::EuclideanPower { p, r: 1.0 },
            None,
            1e-6,
        ));
    }
    cases.push(equality(
        "euclidean_log n=2 r=0.5 R=1".into(),
        2,
        Exponent::Finite(2.0),
        RadialKind::EuclideanLog { r: 0.5, big_r: 1.0 },
        Some(1.0),
        1e-4,
    ));
    cases.push(equality(
        "euclidean_outer_power n=3 p=5 R=1".into(),
        3,
        Exponent::Finite(5.0),
        RadialKind::EuclideanOuterPower { p: 5.0, big_r: 1.0 },
        Some(1.0),
        1e-8,
    ));
    cases.push(equality(
        "linear_tent n=3 R=1".into(),
        3,
        Exponent::Infinity,
        RadialKind::LinearTent { big_r: 1.0 },
        Some(1.0),
        1e-8,
    ));
    cases.push(Box::new(move || {
        let label = "ramp n=3 p=1 r=1e-3".to_string();
        let run = || -> Result<Vec<Pending>> {
            let m = Manifold::euclidean(3)?;
            let u = make_extremal(RadialKind::Ramp { r: 1e-3 }, &m, &q)?;
            let rep = imbedding_report(&u, &m, Exponent::One, None, &q, tol)?;
            let limit = threshold(rep.theorem_id, rep.inputs.clone(), rel_gap(rep.lhs, rep.rhs), 0.01);
            Ok(vec![
                pending(format!("{label} bound"), Ok(rep), ineq),
                pending(format!("{label} ratio within 1%"), Ok(limit), Rule::Threshold),
            ])
        };
        run().unwrap_or_else(|e| vec![pending(label.clone(), Err(e), ineq)])
    }));

    // randomized piecewise-linear functions, one stream per case
    for (case, tag) in ["i", "ii", "iii", "iv"].into_iter().enumerate() {
        let mut rng = SplitMix64::seed_from_u64(cfg.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(case as u64 + 1)));
        for k in 0..cfg.imbedding_cases {
            let profile = BUILTINS[k % 2];
            let n = 2 + ((k / 2) % 3) as u32;
            let nf = n as f64;
            let p = match case {
                0 if rng.random_bool(0.25) => Exponent::One,
                0 => Exponent::Finite(rng.random_range(1.1..nf - 0.1)),
                1 => Exponent::Finite(nf),
                2 => Exponent::Finite(nf + rng.random_range(0.5..4.0)),
                _ => Exponent::Infinity,
            };
            let (samples, support) = random_samples(&mut rng);
            let omega = (case > 0).then(|| support * rng.random_range(1.0..2.0));
            cases.push(Box::new(move || {
                let label = format!("case {tag} #{k} {profile} n={n} p={p} knots={}", samples.len());
                let outcome = builtin(profile, n).and_then(|m| {
                    let u = make_extremal(RadialKind::CustomSamples { samples: samples.clone() }, &m, &q)?;
                    imbedding_report(&u, &m, p, omega, &q, tol)
                });
                vec![pending(label, outcome, ineq)]
            }));
        }
    }
    cases
}

const SANDWICH_GRID: [f64; 4] = [1.5, 2.0, 4.0, 8.0];
const MONOTONE_GRID: [f64; 6] = [1.5, 2.0, 3.0, 4.0, 6.0, 8.0];

fn frequency_cases(cfg: &VerifyConfig) -> Vec<Case<'_>> {
    let q = cfg.quadrature;
    let tol = cfg.inequality_tol(bounds::DEFAULT_TOL);
    let ineq = Rule::Inequality(bounds::DEFAULT_TOL);
    let rayleigh = RayleighSettings {
        seed: cfg.seed,
        ..RayleighSettings::default()
    };
    let mut cases: Vec<Case<'_>> = Vec::new();

    cases.push(Box::new(move || {
        let run = || -> Result<Vec<Pending>> {
            let e3 = Manifold::euclidean(3)?;
            let inputs = BoundInputs::new(&e3, Exponent::Finite(2.0)).outer(1.0);
            let g = mazya_constant(&e3, Exponent::Finite(2.0), 1.0, &q)?;
            let mut out = vec![
                pending(
                    "euclidean n=3 p=2 R=1 gamma = 81/4",
                    Ok(threshold(TheoremId::Freq41, inputs.clone(), rel_gap(g.gamma, 20.25), 1e-6)),
                    Rule::Threshold,
                ),
                pending(
                    "euclidean n=3 p=2 R=1 gamma argmin = 2/3",
                    Ok(threshold(TheoremId::Freq41, inputs.clone(), (g.argmin - 2.0 / 3.0).abs(), 1e-4)),
                    Rule::Threshold,
                ),
            ];
            let pi2 = std::f64::consts::PI.powi(2);
            for (n, target) in [(3u32, pi2), (2, 5.783_185_962_946_784)] {
                let m = Manifold::euclidean(n)?;
                let l = rayleigh_oracle(&m, 2.0, 1.0, &rayleigh)?;
                out.push(pending(
                    format!("euclidean n={n} p=2 R=1 oracle eigenvalue"),
                    Ok(threshold(TheoremId::Freq41, BoundInputs::new(&m, Exponent::Finite(2.0)), rel_gap(l.lambda, target), 0.01)),
                    Rule::Threshold,
                ));
            }
            for (n, big_r) in [(3u32, 1.0), (2, 2.0), (4, 0.5)] {
                let m = Manifold::euclidean(n)?;
                let g = mazya_constant(&m, Exponent::One, big_r, &q)?;
                out.push(pending(
                    format!("euclidean n={n} p=1 R={big_r} gamma = n/R"),
                    Ok(threshold(TheoremId::Freq41, BoundInputs::new(&m, Exponent::One), rel_gap(g.gamma, n as f64 / big_r), 1e-9)),
                    Rule::Threshold,
                ));
            }
            Ok(out)
        };
        run().unwrap_or_else(|e| vec![pending("frequency examples", Err(e), Rule::Threshold)])
    }));

    for profile in BUILTINS {
        for n in [2u32, 3] {
            cases.push(Box::new(move || {
                let label = format!("{profile} n={n} R=1");
                let run = || -> Result<Vec<Pending>> {
                    let m = builtin(profile, n)?;
                    let mut out = Vec::new();
                    let mut scaled = Vec::new();
                    for p in MONOTONE_GRID {
                        let exp = Exponent::Finite(p);
                        let inputs = BoundInputs::new(&m, exp).outer(1.0);
                        if SANDWICH_GRID.contains(&p) {
                            let rep = frequency_report(&m, exp, 1.0, &q, &rayleigh, DEFAULT_PROXY_ORDER)?;
                            let lambda = rep.lambda_oracle.unwrap_or(f64::NAN);
                            let factor = rep.sandwich_factor.unwrap_or(f64::NAN);
                            out.push(pending(
                                format!("{label} p={p} oracle <= gamma"),
                                Ok(BoundReport::new(TheoremId::Sandwich42, inputs.clone(), lambda, rep.gamma_p, Direction::AtMost, 1e-3)),
                                Rule::Threshold,
                            ));
                            out.push(pending(
                                format!("{label} p={p} gamma <= factor * oracle"),
                                Ok(BoundReport::new(TheoremId::Sandwich42, inputs.clone(), rep.gamma_p, factor * lambda, Direction::AtMost, 1e-2)),
                                Rule::Threshold,
                            ));
                            out.push(pending(
                                format!("{label} p={p} oracle >= lower bound"),
                                Ok(BoundReport::new(TheoremId::Freq41, inputs, lambda, rep.lambda_lower_41, Direction::AtLeast, 1e-3)),
                                Rule::Threshold,
                            ));
                            scaled.push((p, p * lambda.powf(1.0 / p)));
                        } else {
                            let l = rayleigh_oracle(&m, p, 1.0, &rayleigh)?;
                            scaled.push((p, p * l.lambda.powf(1.0 / p)));
                        }
                    }
                    for w in scaled.windows(2) {
                        out.push(pending(
                            format!("{label} p lambda^(1/p) from p={} to p={}", w[0].0, w[1].0),
                            Ok(BoundReport::new(
                                TheoremId::PLambdaMonotone,
                                BoundInputs::new(&m, Exponent::Finite(w[1].0)).outer(1.0),
                                w[1].1,
                                w[0].1,
                                Direction::AtLeast,
                                tol,
                            )),
                            ineq,
                        ));
                    }
                    for p in [Exponent::One, Exponent::Infinity] {
                        let rep = frequency_report(&m, p, 1.0, &q, &rayleigh, DEFAULT_PROXY_ORDER)?;
                        let inputs = BoundInputs::new(&m, p).outer(1.0);
                        out.push(pending(
                            format!("{label} p={p} lower bound"),
                            Ok(BoundReport::new(TheoremId::Freq41, inputs.clone(), rep.gamma_p, rep.lambda_lower_41, Direction::AtLeast, tol)),
                            ineq,
                        ));
                        if p == Exponent::Infinity {
                            out.push(pending(
                                format!("{label} p=inf proxy >= 1/R"),
                                Ok(BoundReport::new(TheoremId::Freq41, inputs, rep.gamma_p, 1.0, Direction::AtLeast, tol)),
                                ineq,
                            ));
                        }
                    }
                    Ok(out)
                };
                run().unwrap_or_else(|e| vec![pending(label.clone(), Err(e), Rule::Threshold)])
            }));
        }
    }
    cases
}

fn beta_for(n: u32) -> Result<f64> {
    Ok(beta_n(&Manifold::euclidean(n)?))
}
