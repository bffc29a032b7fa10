//! Principal p-frequencies of geodesic balls: the Maz'ya constant from ball
//! condensers, the explicit lower bound, and a radial Rayleigh-quotient oracle.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{sharp_constant, SharpKind};
use crate::capacity::{ball_capacity, Condenser, Exponent};
use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, Dimension, Manifold};
use crate::optimize::{scan_then_golden, solve_tridiagonal};
use crate::quadrature::QuadratureSettings;

/// Order of the `gamma_p^{1/p}` proxy used for `p = inf`.
pub const DEFAULT_PROXY_ORDER: f64 = 100.0;

/// Relative slack of the oracle-side flags of a [`FrequencyReport`].
pub const ORACLE_TOL: f64 = 1e-3;

/// Relative slack of the upper sandwich flag.
pub const SANDWICH_UPPER_TOL: f64 = 1e-2;

const INNER_STEPS: usize = 500;
const INNER_RTOL: f64 = 1e-14;

/// `gamma_p(B_R) = inf_r cap_p(r, R) / |B_r|` and where it is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MazyaConstant {
    pub gamma: f64,
    pub ln_gamma: f64,
    pub argmin: f64,
    pub rel_error: f64,
}

/// Maz'ya constant of `B(o, R)` over centred ball condensers.
pub fn mazya_constant(
    m: &Manifold,
    p: Exponent,
    big_r: f64,
    q: &QuadratureSettings,
) -> Result<MazyaConstant> {
    if !(big_r > 0.0) {
        return Err(Error::Domain(format!("R must be positive, got {big_r}")));
    }
    m.check_radius(big_r)?;
    let pv = match p {
        Exponent::SubOne(_) | Exponent::Infinity => {
            return Err(Error::Regime(format!(
                "the Maz'ya constant needs 1 <= p < inf, got p = {p}"
            )))
        }
        other => other.value(),
    };
    let objective = |x: f64| -> Result<f64> {
        let r = x.exp();
        let cap = ball_capacity(m, p, Condenser::new(r, big_r)?, q)?;
        Ok(cap.ln_value - m.ball_volume(r, q)?.ln())
    };
    let lo = (big_r * 1e-4).ln();
    let hi = big_r.ln() + (-1e-9f64).ln_1p();
    let best = scan_then_golden(objective, lo, hi, 64, 1e-11, 0.0)?;
    let mut result = MazyaConstant {
        gamma: best.value.exp(),
        ln_gamma: best.value,
        argmin: best.x.exp(),
        rel_error: pv * q.rel_tol,
    };
    if pv == 1.0 || best.at_upper {
        // p = 1: S_r / |B_r| extends continuously to r = R
        let s = m.sphere_area(big_r)?;
        let end = (s / m.ball_volume(big_r, q)?).ln();
        if matches!(p, Exponent::One) && end <= result.ln_gamma {
            result = MazyaConstant {
                gamma: end.exp(),
                ln_gamma: end,
                argmin: big_r,
                rel_error: q.rel_tol,
            };
        }
    }
    Ok(result)
}

/// Explicit lower bound on `lambda_{1,p}(Omega)` in terms of `|Omega|`.
pub fn frequency_lower_bound(n: Dimension, p: Exponent, volume: f64) -> Result<f64> {
    if !(volume > 0.0) {
        return Err(Error::Domain(format!("volume must be positive, got {volume}")));
    }
    let nf = n.as_f64();
    let coefficient = sharp_constant(n, p, SharpKind::Freq41)?;
    let power = match p {
        Exponent::Finite(pv) => pv / nf,
        _ => 1.0 / nf,
    };
    Ok(coefficient * volume.powf(-power))
}

/// Settings of the Rayleigh oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayleighSettings {
    /// Uniform intervals on `[0, R]`.
    pub intervals: usize,
    /// Random starts besides the sinc-shaped one.
    pub random_starts: usize,
    pub seed: u64,
    /// Relative change of the quotient at which an iteration stops.
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Default for RayleighSettings {
    fn default() -> Self {
        Self {
            intervals: 1024,
            random_starts: 5,
            seed: 0,
            rel_tol: 1e-9,
            max_iterations: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayleighResult {
    pub lambda: f64,
    /// Largest iteration count over the starts.
    pub iterations: usize,
    /// Relative spread of the final quotients over the starts.
    pub start_spread: f64,
}

struct RadialGrid {
    p: f64,
    /// `S(midpoint) h^{1-p}`.
    stiffness: Vec<f64>,
    /// `S(midpoint) h`.
    mass: Vec<f64>,
}

impl RadialGrid {
    fn energy(&self, v: &[f64]) -> f64 {
        let n = v.len();
        (0..n)
            .map(|i| {
                let next = if i + 1 < n { v[i + 1] } else { 0.0 };
                self.stiffness[i] * (next - v[i]).abs().powf(self.p)
            })
            .sum()
    }

    fn mass_of(&self, v: &[f64]) -> f64 {
        let n = v.len();
        (0..n)
            .map(|i| {
                let next = if i + 1 < n { v[i + 1] } else { 0.0 };
                self.mass[i] * (0.5 * (v[i] + next)).abs().powf(self.p)
            })
            .sum()
    }

    /// `grad M(u) / p`.
    fn mass_gradient(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let mut g = vec![0.0; n];
        for i in 0..n {
            let next = if i + 1 < n { u[i + 1] } else { 0.0 };
            let avg = 0.5 * (u[i] + next);
            let w = if avg == 0.0 {
                0.0
            } else {
                self.mass[i] * avg.abs().powf(self.p - 2.0) * avg * 0.5
            };
            g[i] += w;
            if i + 1 < n {
                g[i + 1] += w;
            }
        }
        g
    }

    /// `argmin_v E(v)/p - <g, v>` by damped Newton from `v`.
    ///
    /// For `p < 2` each step also tries the minimiser of the quadratic
    /// majorant with curvature `|d|^{p-2}`, which cannot overshoot `d = 0`.
    fn solve(&self, g: &[f64], mut v: Vec<f64>) -> Result<Vec<f64>> {
        let n = v.len();
        let p = self.p;
        let phi = |v: &[f64]| self.energy(v) / p - v.iter().zip(g).map(|(a, b)| a * b).sum::<f64>();
        let mut current = phi(&v);
        // p > 2 degenerates where the slope vanishes
        let mut floor_factor = if p > 2.0 { 1e-3 } else { 1e-8 };
        for _ in 0..INNER_STEPS {
            let slopes: Vec<f64> = (0..n)
                .map(|i| (if i + 1 < n { v[i + 1] } else { 0.0 }) - v[i])
                .collect();
            let mean = slopes.iter().map(|d| d.abs()).sum::<f64>() / n as f64;
            let floor = floor_factor * mean;
            let mut grad: Vec<f64> = g.iter().map(|x| -x).collect();
            let mut curvature = Vec::with_capacity(n);
            for (i, &d) in slopes.iter().enumerate() {
                let first = self.stiffness[i] * d.abs().powf(p - 2.0) * d;
                grad[i] -= first;
                if i + 1 < n {
                    grad[i + 1] += first;
                }
                curvature.push(self.stiffness[i] * d.abs().max(floor).powf(p - 2.0));
            }
            let rhs: Vec<f64> = grad.iter().map(|x| -x).collect();
            let step_for = |factor: f64| {
                let diag: Vec<f64> = (0..n)
                    .map(|i| factor * (curvature[i] + if i > 0 { curvature[i - 1] } else { 0.0 }))
                    .collect();
                let off: Vec<f64> = curvature[..n - 1].iter().map(|c| -factor * c).collect();
                solve_tridiagonal(&off, &diag, &off, &rhs).filter(|s| s.iter().all(|x| x.is_finite()))
            };
            let Some(step) = step_for(p - 1.0) else {
                if floor_factor < 1.0 {
                    floor_factor *= 10.0;
                    continue;
                }
                return Err(Error::Convergence(
                    "singular Newton system in the Rayleigh oracle".into(),
                ));
            };
            let decrement: f64 = step.iter().zip(&grad).map(|(s, g)| -s * g).sum();
            if decrement.abs() <= INNER_RTOL * current.abs().max(1e-300) {
                return Ok(v);
            }
            let shifted = |step: &[f64], t: f64| -> Vec<f64> {
                v.iter().zip(step).map(|(a, s)| a + t * s).collect()
            };
            let mut best: Option<(f64, Vec<f64>)> = None;
            let mut t = 1.0;
            while t > 1e-12 {
                let trial = shifted(&step, t);
                let value = phi(&trial);
                if value <= current - 1e-4 * t * decrement.max(0.0) {
                    best = Some((value, trial));
                    break;
                }
                t *= 0.5;
            }
            if p < 2.0 {
                if let Some(mm) = step_for(1.0) {
                    let trial = shifted(&mm, 1.0);
                    let value = phi(&trial);
                    if value < current && best.as_ref().is_none_or(|(b, _)| value < *b) {
                        best = Some((value, trial));
                    }
                }
            }
            match best {
                Some((value, trial)) => {
                    current = value;
                    v = trial;
                }
                None if floor_factor < 1.0 => floor_factor *= 10.0,
                // no descent left at working precision
                None if decrement.abs() <= 1e-9 * current.abs() => return Ok(v),
                None => {
                    return Err(Error::Convergence(format!(
                        "Rayleigh oracle: line search failed with Newton decrement {decrement:e}"
                    )))
                }
            }
        }
        Err(Error::Convergence(format!(
            "Rayleigh oracle: inner solve exceeded {INNER_STEPS} Newton steps"
        )))
    }

    fn normalise(&self, v: &mut [f64]) {
        let k = self.mass_of(v).powf(-1.0 / self.p);
        v.iter_mut().for_each(|x| *x *= k);
    }

    /// Nonlinear inverse iteration from `u`; returns the final quotient and iteration count.
    fn inverse_iteration(
        &self,
        mut u: Vec<f64>,
        settings: &RayleighSettings,
    ) -> Result<(f64, usize)> {
        self.normalise(&mut u);
        let mut quotient = self.energy(&u);
        for k in 1..=settings.max_iterations {
            let g = self.mass_gradient(&u);
            let warm: Vec<f64> = u
                .iter()
                .map(|x| x * quotient.powf(-1.0 / (self.p - 1.0)))
                .collect();
            let mut v = self.solve(&g, warm)?;
            self.normalise(&mut v);
            let next = self.energy(&v);
            let change = (quotient - next).abs() / next;
            u = v;
            quotient = next;
            if change < settings.rel_tol {
                return Ok((quotient, k));
            }
        }
        Err(Error::Convergence(format!(
            "Rayleigh oracle: {} iterations without reaching relative change {:e} (quotient {quotient})",
            settings.max_iterations, settings.rel_tol
        )))
    }
}

/// Smallest discrete radial Rayleigh quotient `int |f'|^p / int |f|^p` on
/// `B(o, R)` with `f(R) = 0`, over several starts.
pub fn rayleigh_oracle(
    m: &Manifold,
    p: f64,
    big_r: f64,
    settings: &RayleighSettings,
) -> Result<RayleighResult> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Regime(format!(
            "the Rayleigh oracle needs 1 < p < inf, got p = {p}"
        )));
    }
    if settings.intervals < 64 {
        return Err(Error::Domain(format!(
            "the Rayleigh oracle needs at least 64 intervals, got {}",
            settings.intervals
        )));
    }
    if !(big_r > 0.0) {
        return Err(Error::Domain(format!("R must be positive, got {big_r}")));
    }
    m.check_radius(big_r)?;
    let n = settings.intervals;
    let h = big_r / n as f64;
    let areas: Vec<f64> = (0..n)
        .map(|i| m.sphere_area((i as f64 + 0.5) * h))
        .collect::<Result<_>>()?;
    let grid = RadialGrid {
        p,
        stiffness: areas.iter().map(|s| s * h.powf(1.0 - p)).collect(),
        mass: areas.iter().map(|s| s * h).collect(),
    };

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(settings.random_starts + 1);
    starts.push(
        (0..n)
            .map(|i| {
                let s = std::f64::consts::PI * i as f64 / n as f64;
                if s == 0.0 {
                    1.0
                } else {
                    s.sin() / s
                }
            })
            .collect(),
    );
    let mut rng = SplitMix64::seed_from_u64(settings.seed);
    for _ in 0..settings.random_starts {
        let mut start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        start.sort_by(|a, b| b.total_cmp(a));
        starts.push(start);
    }
    let runs: Vec<(f64, usize)> = starts
        .into_par_iter()
        .map(|u| grid.inverse_iteration(u, settings))
        .collect::<Result<_>>()?;
    let lambda = runs.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let worst = runs.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(RayleighResult {
        lambda,
        iterations: runs.iter().map(|r| r.1).max().unwrap_or(0),
        start_spread: (worst - lambda) / lambda,
    })
}

/// Frequency bounds of one ball, assembled and cross-checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub n: u32,
    pub p: Exponent,
    pub profile: String,
    #[serde(rename = "R")]
    pub big_r: f64,
    /// `gamma_p`, or `gamma_{p*}^{1/p*}` for `p = inf`.
    pub gamma_p: f64,
    pub gamma_argmin: f64,
    pub gamma_rel_error: f64,
    pub lambda_lower_41: f64,
    /// Rayleigh oracle (`1 < p < inf`); `gamma_1` for `p = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_start_spread: Option<f64>,
    /// `p^p (p-1)^{1-p}`, the upper sandwich factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proxy_order: Option<f64>,
    /// `|R gamma_{p*}^{1/p*} - 1|` for `p = inf`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_gap: Option<f64>,
    pub sandwich_ok: bool,
    pub bound_ok: bool,
}

/// Assembles the frequency report of `B(o, R)`.
///
/// For `p = inf` the frequency is represented by `gamma_{p*}^{1/p*}`; both
/// flags then compare it from above with `nu_n^{1/n} |B_R|^{-1/n}` and `1/R`.
pub fn frequency_report(
    m: &Manifold,
    p: Exponent,
    big_r: f64,
    q: &QuadratureSettings,
    rayleigh: &RayleighSettings,
    proxy_order: f64,
) -> Result<FrequencyReport> {
    if let Exponent::SubOne(_) = p {
        return Err(Error::Regime("frequency requires p ≥ 1".into()));
    }
    let volume = m.ball_volume(big_r, q)?;
    let lower = frequency_lower_bound(m.dim(), p, volume)?;
    let mut report = FrequencyReport {
        n: m.dim().get(),
        p,
        profile: m.profile().kind().name().to_string(),
        big_r,
        gamma_p: f64::NAN,
        gamma_argmin: f64::NAN,
        gamma_rel_error: 0.0,
        lambda_lower_41: lower,
        lambda_oracle: None,
        oracle_start_spread: None,
        sandwich_factor: None,
        proxy_order: None,
        limit_gap: None,
        sandwich_ok: false,
        bound_ok: false,
    };
    match p {
        Exponent::SubOne(_) => unreachable!(),
        Exponent::One => {
            let g = mazya_constant(m, p, big_r, q)?;
            report.gamma_p = g.gamma;
            report.gamma_argmin = g.argmin;
            report.gamma_rel_error = g.rel_error;
            report.lambda_oracle = Some(g.gamma);
            report.sandwich_ok = true;
            report.bound_ok = lower <= g.gamma * (1.0 + ORACLE_TOL);
        }
        Exponent::Finite(pv) => {
            let g = mazya_constant(m, p, big_r, q)?;
            let oracle = rayleigh_oracle(m, pv, big_r, rayleigh)?;
            let factor = pv.powf(pv) * (pv - 1.0).powf(1.0 - pv);
            report.gamma_p = g.gamma;
            report.gamma_argmin = g.argmin;
            report.gamma_rel_error = g.rel_error;
            report.lambda_oracle = Some(oracle.lambda);
            report.oracle_start_spread = Some(oracle.start_spread);
            report.sandwich_factor = Some(factor);
            report.sandwich_ok = oracle.lambda <= g.gamma * (1.0 + ORACLE_TOL)
                && g.gamma <= factor * oracle.lambda * (1.0 + SANDWICH_UPPER_TOL);
            report.bound_ok = lower <= oracle.lambda * (1.0 + ORACLE_TOL);
        }
        Exponent::Infinity => {
            if !(proxy_order > m.n()) || !proxy_order.is_finite() {
                return Err(Error::Domain(format!(
                    "proxy order must be finite and exceed n, got {proxy_order}"
                )));
            }
            let g = mazya_constant(m, Exponent::Finite(proxy_order), big_r, q)?;
            let proxy = (g.ln_gamma / proxy_order).exp();
            report.gamma_p = proxy;
            report.gamma_argmin = g.argmin;
            report.gamma_rel_error = g.rel_error / proxy_order;
            report.proxy_order = Some(proxy_order);
            report.limit_gap = Some((proxy * big_r - 1.0).abs());
            report.sandwich_ok = proxy >= (1.0 - ORACLE_TOL) / big_r;
            report.bound_ok = proxy >= lower * (1.0 - ORACLE_TOL);
        }
    }
    Ok(report)
}

/// `nu_n^{1/n} |B_R|^{-1/n}`, the `p = inf` lower bound for a ball of volume `volume`.
pub fn infinity_lower_bound(n: Dimension, volume: f64) -> Result<f64> {
    let nu = unit_ball_volume(n.get() as i64)?;
    Ok((nu / volume).powf(1.0 / n.as_f64()))
}
