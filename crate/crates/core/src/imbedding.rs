//! Radial test functions, weak Lebesgue quasinorms and the sharp weak
//! `(p, q)` imbeddings.
//!
//! Super-level sets `{u >= lambda}` of a nonincreasing radial `u` are closed
//! balls, so the distribution function is a ball volume at
//! [`RadialFunction::level_radius`].

use serde::{Deserialize, Serialize};

use crate::bounds::{sharp_constant, BoundInputs, BoundReport, Direction, SharpKind, TheoremId};
use crate::capacity::{CapacitaryPotential, Condenser, Exponent, PotentialForm};
use crate::error::{Error, Result};
use crate::geometry::Manifold;
use crate::optimize::golden_section;
use crate::quadrature::{integrate, integrate_to_infinity, QuadratureSettings};

/// Points of the logarithmic level grid in the supremum searches.
pub const LEVEL_GRID: usize = 512;

/// Smallest level of the grid, relative to `sup u`.
const LEVEL_FLOOR: f64 = 1e-8;

/// Shape of a radial function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum RadialKind {
    /// Capacitary potential of `closed B(o, r)` in `B(o, R)`, or in the whole
    /// manifold when `R` is absent.
    Capacitary {
        p: f64,
        r: f64,
        #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
        big_r: Option<f64>,
    },
    /// `1` on `[0, r]`, linear down to `0` on `[r, r + r^2]`.
    Ramp { r: f64 },
    /// `(max(t, r) / r)^{(p-n)/(p-1)}`, `1 < p < n`.
    EuclideanPower { p: f64, r: f64 },
    /// `ln(R / max(t, r)) / ln(R / r)`.
    EuclideanLog {
        r: f64,
        #[serde(rename = "R")]
        big_r: f64,
    },
    /// `1 - (t / R)^{(p-n)/(p-1)}`, `n < p < inf`.
    EuclideanOuterPower {
        p: f64,
        #[serde(rename = "R")]
        big_r: f64,
    },
    /// `1 - t / R`.
    LinearTent {
        #[serde(rename = "R")]
        big_r: f64,
    },
    /// Piecewise-linear interpolation of `[t, value]` pairs.
    CustomSamples { samples: Vec<[f64; 2]> },
}

/// A nonincreasing radial function `amplitude * base(d(o, x))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction {
    kind: RadialKind,
    amplitude: f64,
    #[serde(skip)]
    n: f64,
    #[serde(skip)]
    potential: Option<CapacitaryPotential>,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Builds a radial function and checks its parameters against the regime of its kind.
pub fn make_extremal(kind: RadialKind, m: &Manifold, q: &QuadratureSettings) -> Result<RadialFunction> {
    let n = m.n();
    let mut potential = None;
    match &kind {
        RadialKind::Capacitary { p, r, big_r } => {
            let form = match big_r {
                Some(big_r) => PotentialForm::Bounded(Condenser::new(*r, *big_r)?),
                None => {
                    if !(*p > 1.0 && *p < n) {
                        return Err(Error::Regime(format!(
                            "the whole-manifold capacitary potential needs 1 < p < n (p = {p}, n = {n})"
                        )));
                    }
                    PotentialForm::Global { inner: *r }
                }
            };
            potential = Some(CapacitaryPotential::new(m, Exponent::new(*p)?, form, q)?);
        }
        RadialKind::Ramp { r } => positive("r", *r)?,
        RadialKind::EuclideanPower { p, r } => {
            positive("r", *r)?;
            if !(*p > 1.0 && *p < n) {
                return Err(Error::Regime(format!(
                    "euclidean_power needs 1 < p < n (p = {p}, n = {n})"
                )));
            }
        }
        RadialKind::EuclideanLog { r, big_r } => {
            positive("r", *r)?;
            Condenser::new(*r, *big_r)?;
        }
        RadialKind::EuclideanOuterPower { p, big_r } => {
            positive("R", *big_r)?;
            if !(*p > n && p.is_finite()) {
                return Err(Error::Regime(format!(
                    "euclidean_outer_power needs n < p < inf (p = {p}, n = {n})"
                )));
            }
        }
        RadialKind::LinearTent { big_r } => positive("R", *big_r)?,
        RadialKind::CustomSamples { samples } => validate_samples(samples)?,
    }
    Ok(RadialFunction {
        kind,
        amplitude: 1.0,
        n,
        potential,
    })
}

fn validate_samples(samples: &[[f64; 2]]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::Domain("custom_samples needs at least two [t, value] pairs".into()));
    }
    if !(samples[0][0] >= 0.0) {
        return Err(Error::Domain("custom_samples must start at t >= 0".into()));
    }
    for w in samples.windows(2) {
        if !(w[1][0] > w[0][0]) {
            return Err(Error::Domain("custom_samples t must be strictly increasing".into()));
        }
        if !(w[1][1] <= w[0][1]) {
            return Err(Error::Domain("custom_samples values must be nonincreasing".into()));
        }
    }
    if samples.iter().any(|s| !(0.0..=1.0).contains(&s[1]) || !s[0].is_finite()) {
        return Err(Error::Domain("custom_samples values must lie in [0, 1]".into()));
    }
    if samples[samples.len() - 1][1] != 0.0 {
        return Err(Error::Domain("custom_samples must end at value 0".into()));
    }
    Ok(())
}

impl RadialFunction {
    pub fn kind(&self) -> &RadialKind {
        &self.kind
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// The same function multiplied by `a > 0`.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        positive("amplitude", a)?;
        Ok(Self {
            amplitude: self.amplitude * a,
            ..self.clone()
        })
    }

    fn power_exponent(&self, p: f64) -> f64 {
        (p - self.n) / (p - 1.0)
    }

    fn base_value(&self, t: f64) -> Result<f64> {
        Ok(match &self.kind {
            RadialKind::Capacitary { .. } => self.potential.as_ref().unwrap().value(t)?,
            RadialKind::Ramp { r } => (1.0 + (r - t) / (r * r)).clamp(0.0, 1.0),
            RadialKind::EuclideanPower { p, r } => (t.max(*r) / r).powf(self.power_exponent(*p)),
            RadialKind::EuclideanLog { r, big_r } => {
                ((big_r / t.max(*r)).ln() / (big_r / r).ln()).max(0.0)
            }
            RadialKind::EuclideanOuterPower { p, big_r } => {
                (1.0 - (t / big_r).powf(self.power_exponent(*p))).max(0.0)
            }
            RadialKind::LinearTent { big_r } => (1.0 - t / big_r).max(0.0),
            RadialKind::CustomSamples { samples } => {
                if t <= samples[0][0] {
                    return Ok(samples[0][1]);
                }
                let last = samples[samples.len() - 1];
                if t >= last[0] {
                    return Ok(0.0);
                }
                let i = samples.partition_point(|s| s[0] <= t) - 1;
                let (a, b) = (samples[i], samples[i + 1]);
                a[1] + (b[1] - a[1]) * (t - a[0]) / (b[0] - a[0])
            }
        })
    }

    /// `u(t)`.
    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.amplitude * self.base_value(t)?)
    }

    /// `u'(t)`; at a kink the right derivative.
    pub fn slope(&self, t: f64) -> f64 {
        let s = match &self.kind {
            RadialKind::Capacitary { .. } => self.potential.as_ref().unwrap().slope(t),
            RadialKind::Ramp { r } => {
                if t >= *r && t < r + r * r {
                    -1.0 / (r * r)
                } else {
                    0.0
                }
            }
            RadialKind::EuclideanPower { p, r } => {
                if t < *r {
                    0.0
                } else {
                    let a = self.power_exponent(*p);
                    a / r * (t / r).powf(a - 1.0)
                }
            }
            RadialKind::EuclideanLog { r, big_r } => {
                if t < *r || t >= *big_r {
                    0.0
                } else {
                    -1.0 / (t * (big_r / r).ln())
                }
            }
            RadialKind::EuclideanOuterPower { p, big_r } => {
                if t >= *big_r {
                    0.0
                } else {
                    let a = self.power_exponent(*p);
                    -a / big_r * (t / big_r).powf(a - 1.0)
                }
            }
            RadialKind::LinearTent { big_r } => {
                if t < *big_r {
                    -1.0 / big_r
                } else {
                    0.0
                }
            }
            RadialKind::CustomSamples { samples } => {
                let last = samples[samples.len() - 1];
                if t < samples[0][0] || t >= last[0] {
                    0.0
                } else {
                    let i = samples.partition_point(|s| s[0] <= t) - 1;
                    let (a, b) = (samples[i], samples[i + 1]);
                    (b[1] - a[1]) / (b[0] - a[0])
                }
            }
        };
        self.amplitude * s
    }

    /// `sup u`.
    pub fn sup(&self) -> f64 {
        match &self.kind {
            RadialKind::CustomSamples { samples } => self.amplitude * samples[0][1],
            _ => self.amplitude,
        }
    }

    /// Radius beyond which `u` vanishes; `inf` for the non-compact kinds.
    pub fn support(&self) -> f64 {
        match &self.kind {
            RadialKind::Capacitary { big_r, .. } => big_r.unwrap_or(f64::INFINITY),
            RadialKind::Ramp { r } => r + r * r,
            RadialKind::EuclideanPower { .. } => f64::INFINITY,
            RadialKind::EuclideanLog { big_r, .. }
            | RadialKind::EuclideanOuterPower { big_r, .. }
            | RadialKind::LinearTent { big_r } => *big_r,
            RadialKind::CustomSamples { samples } => samples[samples.len() - 1][0],
        }
    }

    /// Radii where `u` fails to be differentiable.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            RadialKind::Capacitary { r, big_r, .. } => {
                let mut k = vec![*r];
                k.extend(big_r);
                k
            }
            RadialKind::Ramp { r } => vec![*r, r + r * r],
            RadialKind::EuclideanPower { r, .. } => vec![*r],
            RadialKind::EuclideanLog { r, big_r } => vec![*r, *big_r],
            RadialKind::EuclideanOuterPower { big_r, .. } | RadialKind::LinearTent { big_r } => {
                vec![*big_r]
            }
            RadialKind::CustomSamples { samples } => samples.iter().map(|s| s[0]).collect(),
        }
    }

    /// Largest `t` with `u(t) >= level`, for `0 < level <= sup u`; `None` above the sup.
    pub fn level_radius(&self, level: f64) -> Result<Option<f64>> {
        if !(level > 0.0) {
            return Err(Error::Domain(format!("level must be positive, got {level}")));
        }
        if level > self.sup() {
            return Ok(None);
        }
        let l = (level / self.amplitude).min(1.0);
        let t = match &self.kind {
            RadialKind::Capacitary { .. } => self.potential.as_ref().unwrap().level_radius(l)?,
            RadialKind::Ramp { r } => r + r * r * (1.0 - l),
            RadialKind::EuclideanPower { p, r } => {
                if l >= 1.0 {
                    *r
                } else {
                    r * l.powf(1.0 / self.power_exponent(*p))
                }
            }
            RadialKind::EuclideanLog { r, big_r } => big_r * (r / big_r).powf(l),
            RadialKind::EuclideanOuterPower { p, big_r } => {
                big_r * (1.0 - l).powf(1.0 / self.power_exponent(*p))
            }
            RadialKind::LinearTent { big_r } => big_r * (1.0 - l),
            RadialKind::CustomSamples { samples } => {
                let i = samples.iter().rposition(|s| s[1] >= l).unwrap_or(0);
                if i + 1 == samples.len() {
                    samples[i][0]
                } else {
                    let (a, b) = (samples[i], samples[i + 1]);
                    a[0] + (a[1] - l) / (a[1] - b[1]) * (b[0] - a[0])
                }
            }
        };
        Ok(Some(t))
    }

    /// Levels `u(kink)` inside `(0, sup u]`, always including the sup.
    fn kink_levels(&self) -> Result<Vec<f64>> {
        let mut levels = vec![self.sup()];
        for t in self.kinks() {
            let v = self.value(t)?;
            if v > 0.0 && v <= self.sup() {
                levels.push(v);
            }
        }
        Ok(levels)
    }
}

/// `mu(lambda) = |{u >= lambda}|`; zero above `sup u`.
pub fn distribution_volume(
    u: &RadialFunction,
    m: &Manifold,
    level: f64,
    q: &QuadratureSettings,
) -> Result<f64> {
    match u.level_radius(level)? {
        None => Ok(0.0),
        Some(t) => m.ball_volume_extended(t, q),
    }
}

/// Weak quasinorm and the level realising it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakNormResult {
    pub value: f64,
    pub maximizing_level: f64,
}

/// `sup_lambda objective(lambda)` over a logarithmic grid plus the kink
/// levels, refined by golden section around the best grid level.
fn sup_over_levels<F>(u: &RadialFunction, mut objective: F) -> Result<WeakNormResult>
where
    F: FnMut(f64) -> Result<Option<f64>>,
{
    let top = u.sup();
    if !(top > 0.0) {
        return Ok(WeakNormResult {
            value: 0.0,
            maximizing_level: 0.0,
        });
    }
    let lo = (top * LEVEL_FLOOR).ln();
    let hi = top.ln();
    let mut levels: Vec<f64> = (0..LEVEL_GRID)
        .map(|i| (lo + (hi - lo) * i as f64 / (LEVEL_GRID - 1) as f64).exp())
        .collect();
    levels.extend(u.kink_levels()?);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut values = Vec::with_capacity(levels.len());
    for &l in &levels {
        values.push(objective(l)?.unwrap_or(f64::NEG_INFINITY));
    }
    let (best, &best_value) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("level grid is nonempty");
    let mut result = WeakNormResult {
        value: best_value,
        maximizing_level: levels[best],
    };
    if best > 0 && best + 1 < levels.len() {
        let mut neg = |x: f64| -> Result<f64> {
            Ok(-objective(x.exp())?.unwrap_or(f64::NEG_INFINITY))
        };
        // refine on each side separately: a kink level may sit at `best`
        for (a, b) in [(levels[best - 1], levels[best]), (levels[best], levels[best + 1])] {
            let (x, v) = golden_section(&mut neg, a.ln(), b.ln(), 1e-12)?;
            if -v > result.value {
                result = WeakNormResult {
                    value: -v,
                    maximizing_level: x.exp(),
                };
            }
        }
    }
    Ok(result)
}

/// `||u||_{q, inf} = sup_lambda lambda mu(lambda)^{1/q}`; `q = inf` gives `sup u`.
pub fn weak_norm(
    u: &RadialFunction,
    m: &Manifold,
    q_exp: f64,
    q: &QuadratureSettings,
) -> Result<WeakNormResult> {
    if !(q_exp > 0.0) {
        return Err(Error::Domain(format!("q must be positive, got {q_exp}")));
    }
    if q_exp == f64::INFINITY {
        return Ok(WeakNormResult {
            value: u.sup(),
            maximizing_level: u.sup(),
        });
    }
    sup_over_levels(u, |l| {
        Ok(Some(l * distribution_volume(u, m, l, q)?.powf(1.0 / q_exp)))
    })
}

/// `||grad u||_p = (int |u'(t)|^p S(t) dt)^{1/p}`; `sup |u'|` for `p = inf`.
pub fn gradient_pnorm(
    u: &RadialFunction,
    m: &Manifold,
    p: Exponent,
    q: &QuadratureSettings,
) -> Result<f64> {
    let support = u.support();
    let mut breaks: Vec<f64> = u
        .kinks()
        .into_iter()
        .filter(|&t| t > 0.0 && t < support)
        .collect();
    breaks.insert(0, 0.0);
    if support.is_finite() {
        breaks.push(support);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let pv = match p {
        Exponent::SubOne(_) => {
            return Err(Error::Regime(format!("gradient norms need p >= 1, got {p}")))
        }
        Exponent::Infinity => {
            let mut worst = 0.0f64;
            for w in breaks.windows(2) {
                for k in 0..=256 {
                    let t = w[0] + (w[1] - w[0]) * k as f64 / 256.0;
                    worst = worst.max(u.slope(t).abs());
                }
            }
            if !support.is_finite() {
                return Err(Error::Divergence(
                    "sup |u'| over an unbounded support is not supported".into(),
                ));
            }
            return Ok(worst);
        }
        other => other.value(),
    };
    let settings = QuadratureSettings {
        max_subdivisions: q.max_subdivisions.max(2000),
        ..*q
    };
    let integrand = |t: f64| {
        let s = u.slope(t).abs();
        if s == 0.0 {
            0.0
        } else {
            s.powf(pv) * m.area_extended(t)
        }
    };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += integrate(integrand, w[0], w[1], &settings)?.value;
    }
    if !support.is_finite() {
        let start = *breaks.last().unwrap();
        let start = if start > 0.0 { start } else { 1.0 };
        let tail = integrate_to_infinity(integrand, start, &settings).map_err(|e| match e {
            Error::Accuracy { .. } => Error::Divergence(format!(
                "int |u'|^{pv} S dt does not converge at infinity"
            )),
            other => other,
        })?;
        // a convergent tail has an integrand that vanishes faster than 1/t
        let far = 1e8 * start;
        if integrand(far) * far > 1e-6 * (total + tail.value) {
            return Err(Error::Divergence(format!(
                "int |u'|^{pv} S dt does not converge at infinity"
            )));
        }
        total += tail.value;
    }
    if !total.is_finite() {
        return Err(Error::Divergence(format!("int |u'|^{pv} S dt is infinite")));
    }
    Ok(total.powf(1.0 / pv))
}

/// Checks the weak imbedding of the regime of `p` for `u`.
///
/// `omega` is the radius of the domain `B(o, R)`; it is required for `p >= n`
/// and ignored for `p < n`.
pub fn imbedding_report(
    u: &RadialFunction,
    m: &Manifold,
    p: Exponent,
    omega: Option<f64>,
    q: &QuadratureSettings,
    tol: f64,
) -> Result<BoundReport> {
    let n = m.n();
    let c = sharp_constant(m.dim(), p, SharpKind::CNp)?;
    let mut inputs = BoundInputs::new(m, p);
    let domain = |inputs: &mut BoundInputs| -> Result<(f64, f64)> {
        let big_r = omega.ok_or_else(|| {
            Error::Domain(format!("p = {p} >= n needs a bounded domain radius R"))
        })?;
        positive("R", big_r)?;
        if u.support() > big_r * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "support radius {} exceeds the domain radius {big_r}",
                u.support()
            )));
        }
        inputs.big_r = Some(big_r);
        Ok((big_r, m.ball_volume_extended(big_r, q)?))
    };
    let (id, lhs, rhs) = match p {
        Exponent::One | Exponent::Finite(_) if p.value() < n => {
            let pv = p.value();
            let weak = weak_norm(u, m, n * pv / (n - pv), q)?;
            (TheoremId::T31i, weak.value, c * gradient_pnorm(u, m, p, q)?)
        }
        Exponent::Finite(pv) if pv == n => {
            let (_, vol) = domain(&mut inputs)?;
            let exponent = 1.0 / n - 1.0;
            let weak = sup_over_levels(u, |l| {
                let mu = distribution_volume(u, m, l, q)?;
                let ratio = (vol / mu).ln();
                Ok((ratio > 0.0).then(|| l * ratio.powf(exponent)))
            })?;
            (TheoremId::T31ii, weak.value, c * gradient_pnorm(u, m, p, q)?)
        }
        Exponent::Finite(pv) => {
            let (_, vol) = domain(&mut inputs)?;
            let weight = vol.powf((pv - n) / (n * pv));
            (TheoremId::T31iii, u.sup(), c * weight * gradient_pnorm(u, m, p, q)?)
        }
        Exponent::Infinity => {
            let (_, vol) = domain(&mut inputs)?;
            (TheoremId::T31iv, u.sup(), c * vol.powf(1.0 / n) * gradient_pnorm(u, m, p, q)?)
        }
        // p = 1 < n is handled by the first arm
        Exponent::SubOne(_) | Exponent::One => {
            return Err(Error::Regime(format!("imbeddings need p >= 1, got {p}")))
        }
    };
    Ok(BoundReport::new(id, inputs, lhs, rhs, Direction::AtMost, tol).with_rel_error(q.rel_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn q() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    fn make(kind: RadialKind, m: &Manifold) -> RadialFunction {
        make_extremal(kind, m, &q()).unwrap()
    }

    #[test]
    fn ramp_shape() {
        let m = Manifold::euclidean(3).unwrap();
        let u = make(RadialKind::Ramp { r: 0.1 }, &m);
        assert_eq!(u.value(0.1).unwrap(), 1.0);
        assert!(u.value(0.11).unwrap().abs() < 1e-12);
        assert_relative_eq!(u.slope(0.105), -100.0, max_relative = 1e-12);
        let g = gradient_pnorm(&u, &m, Exponent::One, &q()).unwrap();
        let exact = 100.0 * 4.0 * PI / 3.0 * (0.11f64.powi(3) - 0.1f64.powi(3));
        assert_relative_eq!(g, exact, max_relative = 1e-10);
    }

    #[test]
    fn power_and_tent_examples() {
        let e3 = Manifold::euclidean(3).unwrap();
        let u = make(RadialKind::EuclideanPower { p: 2.0, r: 1.0 }, &e3);
        for t in [0.5, 1.0, 2.0, 7.0] {
            assert_relative_eq!(u.value(t).unwrap(), 1.0f64.min(1.0 / t), max_relative = 1e-14);
        }
        let nu3 = 4.0 * PI / 3.0;
        assert_relative_eq!(distribution_volume(&u, &e3, 0.5, &q()).unwrap(), 8.0 * nu3, max_relative = 1e-12);
        assert_eq!(distribution_volume(&u, &e3, 2.0, &q()).unwrap(), 0.0);
        let w = weak_norm(&u, &e3, 6.0, &q()).unwrap();
        assert_relative_eq!(w.value, nu3.powf(1.0 / 6.0), max_relative = 1e-12);
        assert_relative_eq!(w.maximizing_level, 1.0, max_relative = 1e-12);

        let e2 = Manifold::euclidean(2).unwrap();
        let tent = make(RadialKind::LinearTent { big_r: 1.0 }, &e2);
        let w = weak_norm(&tent, &e2, 2.0, &q()).unwrap();
        assert_relative_eq!(w.value, PI.sqrt() / 4.0, max_relative = 1e-10);
        assert_relative_eq!(w.maximizing_level, 0.5, max_relative = 1e-5);
        let tent3 = make(RadialKind::LinearTent { big_r: 1.0 }, &e3);
        for p in [1.5, 2.0, 4.0] {
            let g = gradient_pnorm(&tent3, &e3, Exponent::Finite(p), &q()).unwrap();
            assert_relative_eq!(g, nu3.powf(1.0 / p), max_relative = 1e-10);
        }
    }

    #[test]
    fn capacitary_gradient_is_global_capacity() {
        let e3 = Manifold::euclidean(3).unwrap();
        let u = make(RadialKind::Capacitary { p: 2.0, r: 1.0, big_r: None }, &e3);
        let g = gradient_pnorm(&u, &e3, Exponent::Finite(2.0), &q()).unwrap();
        assert_relative_eq!(g, (4.0 * PI).sqrt(), max_relative = 1e-8);
    }

    #[test]
    fn equality_cases() {
        let tol = 1e-6;
        for (n, p) in [(3, 2.0), (4, 2.0), (5, 3.0)] {
            let m = Manifold::euclidean(n).unwrap();
            let u = make(RadialKind::EuclideanPower { p, r: 0.7 }, &m);
            let rep = imbedding_report(&u, &m, Exponent::Finite(p), None, &q(), tol).unwrap();
            assert!((rep.ratio() - 1.0).abs() < 1e-6, "n={n} p={p}: {}", rep.ratio());
        }
        let e2 = Manifold::euclidean(2).unwrap();
        let u = make(RadialKind::EuclideanLog { r: 0.5, big_r: 1.0 }, &e2);
        let rep = imbedding_report(&u, &e2, Exponent::Finite(2.0), Some(1.0), &q(), tol).unwrap();
        assert!((rep.ratio() - 1.0).abs() < 1e-4, "{}", rep.ratio());
        let e3 = Manifold::euclidean(3).unwrap();
        let u = make(RadialKind::EuclideanOuterPower { p: 5.0, big_r: 2.0 }, &e3);
        let rep = imbedding_report(&u, &e3, Exponent::Finite(5.0), Some(2.0), &q(), tol).unwrap();
        assert!((rep.ratio() - 1.0).abs() < 1e-8, "{}", rep.ratio());
        let u = make(RadialKind::LinearTent { big_r: 1.5 }, &e3);
        let rep = imbedding_report(&u, &e3, Exponent::Infinity, Some(1.5), &q(), tol).unwrap();
        assert!((rep.ratio() - 1.0).abs() < 1e-8, "{}", rep.ratio());
    }

    #[test]
    fn custom_samples_and_errors() {
        let m = Manifold::hyperbolic(2).unwrap();
        let u = make(
            RadialKind::CustomSamples {
                samples: vec![[0.0, 1.0], [0.5, 1.0], [1.0, 0.25], [2.0, 0.0]],
            },
            &m,
        );
        assert_relative_eq!(u.value(0.75).unwrap(), 0.625);
        assert_relative_eq!(u.level_radius(0.625).unwrap().unwrap(), 0.75, max_relative = 1e-14);
        assert_relative_eq!(u.level_radius(1.0).unwrap().unwrap(), 0.5);
        for p in [1.5, 2.0, 3.0] {
            let rep = imbedding_report(&u, &m, Exponent::Finite(p), Some(2.0), &q(), 1e-6).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        let err = imbedding_report(&u, &m, Exponent::Finite(3.0), Some(1.0), &q(), 1e-6).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let e3 = Manifold::euclidean(3).unwrap();
        let pw = make(RadialKind::EuclideanPower { p: 2.0, r: 1.0 }, &e3);
        let err = gradient_pnorm(&pw, &e3, Exponent::One, &q()).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)), "{err:?}");
        assert!(make_extremal(RadialKind::EuclideanPower { p: 3.0, r: 1.0 }, &e3, &q()).is_err());
        let json = r#"{"kind":"custom_samples","params":{"samples":[[0,1],[1,0]]}}"#;
        let kind: RadialKind = serde_json::from_str(json).unwrap();
        assert!(matches!(kind, RadialKind::CustomSamples { .. }));
    }
}
