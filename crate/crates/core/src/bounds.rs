//! Sharp constants, inequality reports and the monotone functionals behind
//! the nonvanishing capacity bounds.

use serde::Serialize;

use crate::capacity::{
    ball_capacity, beta_n, global_capacity, ln_condenser_integral, ln_warp_power, warp_exponent,
    Condenser, Exponent,
};
use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, Dimension, Manifold};
use crate::quadrature::QuadratureSettings;

/// Default relative tolerance of inequality checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Closed-form constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SharpKind {
    T21i,
    T21iii,
    T21iv,
    BetaN,
    CNp,
    /// Coefficient of `|Omega|^{-p/n}` in the frequency lower bound.
    Freq41,
}

/// Evaluates a sharp constant for `(n, p)`.
pub fn sharp_constant(n: Dimension, p: Exponent, kind: SharpKind) -> Result<f64> {
    let nf = n.as_f64();
    let nu = unit_ball_volume(n.get() as i64)?;
    let regime = |what: &str| {
        Err(Error::Regime(format!(
            "{kind:?} needs {what} (got p = {p}, n = {n})"
        )))
    };
    match kind {
        SharpKind::T21i => match p {
            Exponent::One => Ok(nf * nu.powf(1.0 / nf)),
            Exponent::Finite(p) if p < nf => {
                Ok(nf * nu.powf(p / nf) * ((nf - p) / (p - 1.0)).powf(p - 1.0))
            }
            _ => regime("1 <= p < n"),
        },
        SharpKind::T21iii => match p {
            Exponent::Finite(p) if p > nf => {
                Ok(nf * nu.powf(p / nf) * ((p - nf) / (p - 1.0)).powf(p - 1.0))
            }
            _ => regime("n < p < inf"),
        },
        SharpKind::T21iv => match p {
            Exponent::Infinity => Ok(nu.powf(1.0 / nf)),
            _ => regime("p = inf"),
        },
        SharpKind::BetaN => Ok(nf.powf(nf / (nf - 1.0)) * nu.powf(1.0 / (nf - 1.0))),
        SharpKind::CNp => match p {
            Exponent::One => Ok(1.0 / (nf * nu.powf(1.0 / nf))),
            Exponent::Finite(p) if p == nf => Ok(1.0 / (nf * nu.powf(1.0 / nf))),
            Exponent::Finite(p) => Ok(nf.powf(-1.0 / p)
                * nu.powf(-1.0 / nf)
                * ((nf - p).abs() / (p - 1.0)).powf((1.0 - p) / p)),
            Exponent::Infinity => Ok(nu.powf(-1.0 / nf)),
            Exponent::SubOne(_) => regime("p >= 1"),
        },
        SharpKind::Freq41 => match p {
            Exponent::One => Ok(nf * nu.powf(1.0 / nf)),
            Exponent::Finite(p) => {
                Ok(nf * nu.powf(p / nf) * p.powf(-p) * nf.max(p - nf).powf(p - 1.0))
            }
            Exponent::Infinity => Ok(nu.powf(1.0 / nf)),
            Exponent::SubOne(_) => regime("p >= 1"),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    T11i,
    T11ii,
    T21i,
    T21ii,
    T21iii,
    T21iv,
    #[serde(rename = "GLOBAL_ISOCAP")]
    GlobalIsocap,
    #[serde(rename = "GEN_ISOPERIMETRIC")]
    GenIsoperimetric,
    T31i,
    T31ii,
    T31iii,
    T31iv,
    /// Quadrature capacity against the discrete oracle.
    #[serde(rename = "CAP_ORACLE")]
    CapacityOracle,
    #[serde(rename = "FREQ41")]
    Freq41,
    #[serde(rename = "SANDWICH42")]
    Sandwich42,
    #[serde(rename = "P_LAMBDA_MONOTONE")]
    PLambdaMonotone,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T11i => "T11i",
            TheoremId::T11ii => "T11ii",
            TheoremId::T21i => "T21i",
            TheoremId::T21ii => "T21ii",
            TheoremId::T21iii => "T21iii",
            TheoremId::T21iv => "T21iv",
            TheoremId::GlobalIsocap => "GLOBAL_ISOCAP",
            TheoremId::GenIsoperimetric => "GEN_ISOPERIMETRIC",
            TheoremId::T31i => "T31i",
            TheoremId::T31ii => "T31ii",
            TheoremId::T31iii => "T31iii",
            TheoremId::T31iv => "T31iv",
            TheoremId::CapacityOracle => "CAP_ORACLE",
            TheoremId::Freq41 => "FREQ41",
            TheoremId::Sandwich42 => "SANDWICH42",
            TheoremId::PLambdaMonotone => "P_LAMBDA_MONOTONE",
        }
    }
}

/// Which way the checked inequality points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `lhs >= rhs`.
    AtLeast,
    /// `lhs <= rhs`.
    AtMost,
}

/// Echo of the inputs of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundInputs {
    pub profile: String,
    pub n: u32,
    pub p: Exponent,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
}

impl BoundInputs {
    pub fn new(m: &Manifold, p: Exponent) -> Self {
        Self {
            profile: m.profile().kind().name().to_string(),
            n: m.dim().get(),
            p,
            alpha: None,
            beta: None,
            r: None,
            big_r: None,
        }
    }

    pub fn radii(mut self, r: f64, big_r: f64) -> Self {
        self.r = Some(r);
        self.big_r = Some(big_r);
        self
    }
}

/// One inequality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem_id: TheoremId,
    pub inputs: BoundInputs,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    /// Signed slack: `lhs - rhs` for `AtLeast`, `rhs - lhs` for `AtMost`.
    pub margin: f64,
    pub relative_margin: f64,
    pub pass: bool,
    pub tolerance: f64,
    /// Ratio after reducing the volume weight to its critical exponent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_lhs: Option<f64>,
    /// Relative error estimate carried by `lhs` and `rhs`.
    pub rel_error: f64,
}

impl BoundReport {
    pub fn new(
        theorem_id: TheoremId,
        inputs: BoundInputs,
        lhs: f64,
        rhs: f64,
        direction: Direction,
        tolerance: f64,
    ) -> Self {
        let margin = match direction {
            Direction::AtLeast => lhs - rhs,
            Direction::AtMost => rhs - lhs,
        };
        let scale = lhs.abs().max(rhs.abs());
        let relative_margin = if scale > 0.0 { margin / scale } else { 0.0 };
        let pass = margin.is_finite() && margin >= -tolerance * scale;
        Self {
            theorem_id,
            inputs,
            lhs,
            rhs,
            direction,
            margin,
            relative_margin,
            pass,
            tolerance,
            reduced_lhs: None,
            rel_error: 0.0,
        }
    }

    pub fn with_rel_error(mut self, rel_error: f64) -> Self {
        self.rel_error = rel_error;
        self
    }

    /// `lhs / rhs`.
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::Domain(format!("tolerance must be nonnegative, got {tol}")));
    }
    Ok(())
}

/// Checks the nonvanishing bound for the regime of `p` on the ball condenser `c`.
///
/// `weight` is `alpha` for `1 <= p < n` (default `1 - p/n`) and `beta` for
/// `p = n` (default `beta_n`); it is ignored otherwise.
pub fn check_theorem21(
    m: &Manifold,
    p: Exponent,
    weight: Option<f64>,
    c: Condenser,
    q: &QuadratureSettings,
    tol: f64,
) -> Result<BoundReport> {
    check_tolerance(tol)?;
    let n = m.n();
    let (r, big_r) = (c.inner(), c.outer());
    let inputs = BoundInputs::new(m, p).radii(r, big_r);
    let vol_big = m.ball_volume(big_r, q)?;
    match p {
        Exponent::SubOne(_) => Err(Error::Regime(format!(
            "nonvanishing bounds need p >= 1, got p = {p}"
        ))),
        Exponent::One | Exponent::Finite(_) if p.value() < n => {
            let pv = p.value();
            let critical = 1.0 - pv / n;
            let alpha = weight.unwrap_or(critical);
            if !alpha.is_finite() || alpha < critical - 1e-15 {
                return Err(Error::HypothesisViolation(format!(
                    "alpha = {alpha} is below 1 - p/n = {critical}; this is the vanishing regime, use vanishing_sweep"
                )));
            }
            if r == 0.0 {
                return Err(Error::DivergentCondenser("the alpha-ratio needs r > 0".into()));
            }
            let cap = ball_capacity(m, p, c, q)?;
            let ln_vol_r = m.ball_volume(r, q)?.ln();
            let ln_lhs = cap.ln_value - alpha * ln_vol_r - (critical - alpha) * vol_big.ln();
            let reduced = (cap.ln_value - critical * ln_vol_r).exp();
            let rhs = sharp_constant(m.dim(), p, SharpKind::T21i)?;
            let mut report = BoundReport::new(
                TheoremId::T21i,
                BoundInputs {
                    alpha: Some(alpha),
                    ..inputs
                },
                ln_lhs.exp(),
                rhs,
                Direction::AtLeast,
                tol,
            )
            .with_rel_error(cap.rel_error + q.rel_tol);
            report.reduced_lhs = Some(reduced);
            Ok(report)
        }
        Exponent::Finite(pv) if pv == n => {
            let bn = beta_n(m);
            let beta = weight.unwrap_or(bn);
            if !(beta > 0.0) {
                return Err(Error::Domain(format!("beta must be positive, got {beta}")));
            }
            if beta > bn * (1.0 + 1e-12) {
                return Err(Error::HypothesisViolation(format!(
                    "beta = {beta} exceeds beta_n = {bn}; this is the vanishing regime, use vanishing_sweep"
                )));
            }
            if r == 0.0 {
                return Err(Error::DivergentCondenser("p = n needs r > 0".into()));
            }
            c.check(m, p)?;
            let li = ln_condenser_integral(m, pv, c, q)?;
            let ln_lhs = -beta * li.value() + vol_big.ln() - m.ball_volume(r, q)?.ln();
            Ok(BoundReport::new(
                TheoremId::T21ii,
                BoundInputs {
                    beta: Some(beta),
                    ..inputs
                },
                ln_lhs.exp(),
                1.0,
                Direction::AtLeast,
                tol,
            )
            .with_rel_error(li.rel_error * beta * li.value() + q.rel_tol))
        }
        Exponent::Finite(pv) => {
            let cap = ball_capacity(m, p, c, q)?;
            let lhs = (cap.ln_value + (pv / n - 1.0) * vol_big.ln()).exp();
            let rhs = sharp_constant(m.dim(), p, SharpKind::T21iii)?;
            Ok(BoundReport::new(TheoremId::T21iii, inputs, lhs, rhs, Direction::AtLeast, tol)
                .with_rel_error(cap.rel_error + q.rel_tol))
        }
        _ => {
            let cap = ball_capacity(m, p, c, q)?;
            let lhs = cap.value * vol_big.powf(1.0 / n);
            let rhs = sharp_constant(m.dim(), p, SharpKind::T21iv)?;
            Ok(BoundReport::new(TheoremId::T21iv, inputs, lhs, rhs, Direction::AtLeast, tol)
                .with_rel_error(q.rel_tol))
        }
    }
}

/// One point of a vanishing-ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanishingSample {
    pub r: f64,
    pub ratio: f64,
}

fn check_grid(grid: &[f64], lo: f64, hi: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|&&x| !(x > lo && x < hi)) {
        return Err(Error::Domain(format!(
            "grid point {bad} lies outside ({lo}, {hi})"
        )));
    }
    Ok(())
}

/// Ratios whose infimum over small balls vanishes below the critical weight:
///
/// * `p != n` finite: `|B_r|^{-alpha} cap_p(r, R)` with `alpha < 1 - p/n`;
/// * `p = inf`: `|B_r|^{1/n} cap_inf(r, R)`;
/// * `p = n`: `|B_r|^{-1} exp(-beta cap_n(r, R)^{1/(1-n)})` with `beta > beta_n`.
pub fn vanishing_sweep(
    m: &Manifold,
    p: Exponent,
    weight: Option<f64>,
    big_r: f64,
    r_grid: &[f64],
    q: &QuadratureSettings,
) -> Result<Vec<VanishingSample>> {
    m.check_radius(big_r)?;
    check_grid(r_grid, 0.0, big_r)?;
    let n = m.n();
    enum Form {
        Alpha(f64),
        Beta(f64),
        Infinity,
    }
    let form = match p {
        Exponent::SubOne(_) => {
            return Err(Error::Regime(format!("vanishing ratios need p >= 1, got {p}")))
        }
        Exponent::Infinity => Form::Infinity,
        Exponent::Finite(pv) if pv == n => {
            let bn = beta_n(m);
            let beta = weight.ok_or_else(|| Error::Domain("p = n needs beta > beta_n".into()))?;
            if !(beta > bn) {
                return Err(Error::HypothesisViolation(format!(
                    "beta = {beta} does not exceed beta_n = {bn}; this is the nonvanishing regime, use check_theorem21"
                )));
            }
            Form::Beta(beta)
        }
        _ => {
            let critical = 1.0 - p.value() / n;
            let alpha = weight.unwrap_or(0.0);
            if !(alpha < critical) {
                return Err(Error::HypothesisViolation(format!(
                    "alpha = {alpha} is not below 1 - p/n = {critical}; this is the nonvanishing regime, use check_theorem21"
                )));
            }
            Form::Alpha(alpha)
        }
    };
    r_grid
        .iter()
        .map(|&r| {
            let c = Condenser::new(r, big_r)?;
            let ln_vol = m.ball_volume(r, q)?.ln();
            let ln_ratio = match form {
                Form::Alpha(alpha) => ball_capacity(m, p, c, q)?.ln_value - alpha * ln_vol,
                Form::Infinity => ln_vol / n - (big_r - r).ln(),
                Form::Beta(beta) => {
                    -beta * ln_condenser_integral(m, n, c, q)?.value() - ln_vol
                }
            };
            Ok(VanishingSample {
                r,
                ratio: ln_ratio.exp(),
            })
        })
        .collect()
}

/// Proof functional to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Functional {
    /// `F`, `F'` and `G` on `r`, for `1 < p < n`.
    F,
    /// `F-bar` on `r`, for `p = n`.
    FBar,
    /// `F-tilde` on the outer radius, for `n < p < inf`.
    FTilde,
}

/// Sampled proof functionals; fields outside the requested case are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneFunctionalSample {
    /// Grid variable: the inner radius, or the outer radius for `F-tilde`.
    pub r: f64,
    pub f: Option<f64>,
    pub f_prime: Option<f64>,
    /// Sum of the magnitudes of the two terms of `F'`, the scale of its sign test.
    pub f_prime_scale: Option<f64>,
    pub g: Option<f64>,
    pub h: f64,
    pub f_bar: Option<f64>,
    pub f_tilde: Option<f64>,
}

/// Samples the monotone functionals on `grid`.
///
/// `alpha` enters `F` only. `big_r` is the outer radius for `F`, `F-bar` and
/// is ignored for `F-tilde`, whose grid is itself a list of outer radii.
pub fn monotone_functionals(
    m: &Manifold,
    p: Exponent,
    alpha: f64,
    which: Functional,
    big_r: f64,
    grid: &[f64],
    q: &QuadratureSettings,
) -> Result<Vec<MonotoneFunctionalSample>> {
    let n = m.n();
    let pv = p.value();
    match (which, p) {
        (Functional::F, Exponent::Finite(pv)) if pv < n => {}
        (Functional::FBar, Exponent::Finite(pv)) if pv == n => {}
        (Functional::FTilde, Exponent::Finite(pv)) if pv > n => {}
        _ => {
            let need = match which {
                Functional::F => "1 < p < n",
                Functional::FBar => "p = n",
                Functional::FTilde => "n < p < inf",
            };
            return Err(Error::Regime(format!(
                "{which:?} needs {need} (got p = {p}, n = {})",
                m.dim()
            )));
        }
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    match which {
        Functional::FTilde => check_grid(grid, 0.0, m.t_max() * (1.0 + f64::EPSILON))?,
        _ => {
            m.check_radius(big_r)?;
            check_grid(grid, 0.0, big_r)?;
        }
    }
    let profile = m.profile();
    let e = warp_exponent(m, pv);
    grid.iter()
        .map(|&r| {
            let w = profile.warp_eval(r)?;
            let a = m.warp_moment(r, q)?;
            let h = w.dphi * a - w.phi.powf(n) / n;
            let mut sample = MonotoneFunctionalSample {
                r,
                f: None,
                f_prime: None,
                f_prime_scale: None,
                g: None,
                h,
                f_bar: None,
                f_tilde: None,
            };
            match which {
                Functional::F => {
                    let k = alpha / (pv - 1.0);
                    let b = ln_warp_power(m, e, r, big_r, q)?.value();
                    let second = w.phi.powf(e * pv) * a;
                    let g = k * b - second;
                    let lead = a.powf(k - 1.0) * w.phi.powf(n - 1.0);
                    sample.f = Some(a.powf(k) * b);
                    sample.g = Some(g);
                    sample.f_prime = Some(lead * g);
                    sample.f_prime_scale = Some(lead * (k.abs() * b + second));
                }
                Functional::FBar => {
                    let inv = ln_warp_power(m, -1.0, r, big_r, q)?.value();
                    sample.f_bar = Some((n * inv).exp() * a);
                }
                Functional::FTilde => {
                    let whole = ln_warp_power(m, e, 0.0, r, q)?;
                    let ln = -(pv - n) / (n * (pv - 1.0)) * a.ln() + whole.ln_value;
                    sample.f_tilde = Some(ln.exp());
                }
            }
            Ok(sample)
        })
        .collect()
}

/// `lim_{r -> 0} F(r)` at the critical weight `alpha = 1 - p/n`, `1 < p < n`:
/// `((p-1)/(n-p)) n^{(n-p)/(n(1-p))}`.
pub fn f_zero_closed_form(n: Dimension, p: f64) -> f64 {
    let n = n.as_f64();
    (p - 1.0) / (n - p) * n.powf((n - p) / (n * (1.0 - p)))
}

/// `lim_{R -> 0} F-tilde(R)` for `n < p < inf`: `((p-1)/(p-n)) n^{(p-n)/(n(p-1))}`.
pub fn f_tilde_zero_closed_form(n: Dimension, p: f64) -> f64 {
    let n = n.as_f64();
    (p - 1.0) / (p - n) * n.powf((p - n) / (n * (p - 1.0)))
}

/// Aitken-extrapolated `F(0)` from `F` at `r = R 2^{-k}`, `k = 16, 17, 18`.
pub fn f_zero_extrapolated(
    m: &Manifold,
    p: Exponent,
    big_r: f64,
    q: &QuadratureSettings,
) -> Result<f64> {
    let alpha = 1.0 - p.value() / m.n();
    let grid: Vec<f64> = (16..=18).rev().map(|k| big_r * 0.5f64.powi(k)).collect();
    let s = monotone_functionals(m, p, alpha, Functional::F, big_r, &grid, q)?;
    // grid ascending: s[0] is the smallest r
    let (x2, x1, x0) = (s[0].f.unwrap(), s[1].f.unwrap(), s[2].f.unwrap());
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let denom = d2 - d1;
    if denom.abs() <= 1e-14 * x2.abs() {
        return Ok(x2);
    }
    Ok(x2 - d2 * d2 / denom)
}

/// Global isocapacitary inequality at `closed B(o, r)`.
///
/// `p = 1` compares `|dB_r|` with `n nu_n^{1/n} |B_r|^{1-1/n}`; `1 < p < n`
/// divides the global capacity by `|B_r|^{1-p/n}`; `p = n` by `|B_r|`.
pub fn global_isocapacitary_check(
    m: &Manifold,
    p: Exponent,
    r: f64,
    r_max: f64,
    q: &QuadratureSettings,
    tol: f64,
) -> Result<BoundReport> {
    check_tolerance(tol)?;
    let n = m.n();
    let g = global_capacity(m, p, r, r_max, q)?;
    let vol_r = m.ball_volume(r, q)?;
    let inputs = BoundInputs::new(m, p).radii(r, r_max);
    let (id, lhs, rhs) = match p {
        Exponent::One => {
            let rhs = sharp_constant(m.dim(), p, SharpKind::T21i)? * vol_r.powf(1.0 - 1.0 / n);
            (TheoremId::GenIsoperimetric, g.value, rhs)
        }
        Exponent::Finite(pv) if pv < n => (
            TheoremId::GlobalIsocap,
            (g.ln_value - (1.0 - pv / n) * vol_r.ln()).exp(),
            sharp_constant(m.dim(), p, SharpKind::T21i)?,
        ),
        Exponent::Finite(pv) if pv == n => (TheoremId::GlobalIsocap, g.value / vol_r, 1.0),
        Exponent::Finite(_) => (
            TheoremId::GlobalIsocap,
            g.value,
            sharp_constant(m.dim(), p, SharpKind::T21iii)?,
        ),
        Exponent::Infinity => (
            TheoremId::GlobalIsocap,
            g.value,
            sharp_constant(m.dim(), p, SharpKind::T21iv)?,
        ),
        Exponent::SubOne(_) => unreachable!("global_capacity rejects p < 1"),
    };
    Ok(BoundReport::new(id, inputs, lhs, rhs, Direction::AtLeast, tol)
        .with_rel_error(g.rel_error + g.tail_fraction))
}
