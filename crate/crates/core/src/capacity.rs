//! Relative and global p-capacities of centred ball condensers.
//!
//! For a condenser `(closed B(o, r), B(o, R))` on a rotationally symmetric
//! manifold the capacitary potential is radial and the capacity is
//!
//! ```text
//! cap_p = ( int_r^R S(t)^{1/(1-p)} dt )^{1-p},   S(t) = n nu_n phi(t)^{n-1}
//! ```
//!
//! for `1 < p < inf`. The remaining regimes are closed-form: zero for
//! `0 < p < 1`, the inner sphere area for `p = 1`, `1 / (R - r)` for `p = inf`.
//!
//! Integrals of `phi^e` (`e = (n-1)/(1-p) < 0`) are carried in log form and
//! rescaled by `phi` at the lower limit, so large `|e|` neither overflows nor
//! underflows.

use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::Manifold;
use crate::optimize::scan_then_golden;
use crate::quadrature::{integrate, QuadratureSettings};

/// Below this distance from 1 the finite-p formula is replaced by its p -> 1 limit.
pub const NEAR_ONE: f64 = 1e-3;

/// Largest tolerated share of the tangent-continued tail in a global p < n capacity.
pub const MAX_TAIL_FRACTION: f64 = 0.25;

/// Points in the bracketing scan of the global infima.
const SCAN_POINTS: usize = 64;

/// Integrability exponent `p`, split into its regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    /// `0 < p < 1`: every capacity vanishes.
    SubOne(f64),
    One,
    /// `1 < p < inf`.
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::InvalidExponent(format!("p must be positive, got {p}")));
        }
        Ok(if p == f64::INFINITY {
            Exponent::Infinity
        } else if p < 1.0 {
            Exponent::SubOne(p)
        } else if p == 1.0 {
            Exponent::One
        } else {
            Exponent::Finite(p)
        })
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::SubOne(p) | Exponent::Finite(p) => p,
            Exponent::One => 1.0,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn regime(self) -> Regime {
        match self {
            Exponent::SubOne(_) => Regime::SubOne,
            Exponent::One => Regime::One,
            Exponent::Finite(_) => Regime::Finite,
            Exponent::Infinity => Regime::Infinity,
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, Exponent::Infinity)
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidExponent(format!("cannot parse p = {s:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => f.write_str("inf"),
            other => write!(f, "{}", other.value()),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Infinity => s.serialize_str("inf"),
            other => s.serialize_f64(other.value()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SubOne,
    One,
    Finite,
    Infinity,
}

/// Ball condenser `(closed B(o, inner), B(o, outer))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condenser {
    inner: f64,
    outer: f64,
}

impl Condenser {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0) || !inner.is_finite() {
            return Err(Error::InvalidCondenser(format!(
                "inner radius must be nonnegative, got {inner}"
            )));
        }
        if !(outer > inner) || !outer.is_finite() {
            return Err(Error::InvalidCondenser(
                "outer radius must exceed inner radius".into(),
            ));
        }
        Ok(Self { inner, outer })
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Checks the horizon and the `r = 0` admissibility rule for `p`.
    pub(crate) fn check(&self, m: &Manifold, p: Exponent) -> Result<()> {
        m.check_radius(self.outer)?;
        if self.inner == 0.0 {
            let point_ok = match p {
                Exponent::Infinity | Exponent::SubOne(_) => true,
                Exponent::Finite(p) => p > m.n(),
                Exponent::One => false,
            };
            if !point_ok {
                return Err(Error::DivergentCondenser(format!(
                    "r = 0 needs p > n or p = inf (p = {p}, n = {})",
                    m.dim()
                )));
            }
        }
        Ok(())
    }
}

/// A capacity together with its logarithm and a relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityValue {
    pub value: f64,
    pub ln_value: f64,
    pub rel_error: f64,
    pub regime: Regime,
}

impl CapacityValue {
    fn exact(value: f64, regime: Regime) -> Self {
        Self {
            value,
            ln_value: value.ln(),
            rel_error: 0.0,
            regime,
        }
    }

    fn from_ln(ln_value: f64, rel_error: f64) -> Self {
        Self {
            value: ln_value.exp(),
            ln_value,
            rel_error,
            regime: Regime::Finite,
        }
    }
}

/// `ln` of an integral, with the relative error of the integral itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LogIntegral {
    pub ln_value: f64,
    pub rel_error: f64,
}

impl LogIntegral {
    pub fn zero() -> Self {
        Self {
            ln_value: f64::NEG_INFINITY,
            rel_error: 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }

    /// `ln(exp(a) + exp(b))`.
    pub fn add(self, other: LogIntegral) -> LogIntegral {
        let (hi, lo) = if self.ln_value >= other.ln_value {
            (self, other)
        } else {
            (other, self)
        };
        if hi.ln_value == f64::NEG_INFINITY {
            return hi;
        }
        let w = (lo.ln_value - hi.ln_value).exp();
        LogIntegral {
            ln_value: hi.ln_value + w.ln_1p(),
            rel_error: (hi.rel_error + w * lo.rel_error) / (1.0 + w),
        }
    }
}

/// `(n - 1) / (1 - p)`, the exponent of `phi` in the capacity integrand.
pub(crate) fn warp_exponent(m: &Manifold, p: f64) -> f64 {
    (m.n() - 1.0) / (1.0 - p)
}

/// `ln int_a^b phi(t)^e dt` for `e < 0`, `0 <= a < b <= t_max`.
///
/// `a > 0` integrates in `u = ln t` after rescaling by `phi(a)`; `a = 0`
/// (requires `e > -1`) substitutes `t = s^{1/(1+e)}`, which removes the
/// endpoint singularity exactly.
pub(crate) fn ln_warp_power(
    m: &Manifold,
    e: f64,
    a: f64,
    b: f64,
    q: &QuadratureSettings,
) -> Result<LogIntegral> {
    m.check_radius(b)?;
    if b <= a {
        return Ok(LogIntegral::zero());
    }
    let profile = m.profile();
    if a > 0.0 {
        let ln_ref = profile.phi(a).ln();
        let phi_a = profile.phi(a);
        let integral = integrate(
            |u: f64| {
                let t = u.exp();
                t * q.pow(profile.phi(t) / phi_a, e)
            },
            a.ln(),
            b.ln(),
            q,
        )?;
        Ok(LogIntegral {
            ln_value: e * ln_ref + integral.value.ln(),
            rel_error: integral.rel_error(),
        })
    } else {
        if e <= -1.0 {
            return Err(Error::DivergentCondenser(format!(
                "int_0 phi^{e} diverges at the origin"
            )));
        }
        let power = 1.0 / (1.0 + e);
        let upper = b.powf(1.0 + e);
        let integral = integrate(
            |s: f64| {
                let t = s.powf(power);
                power * q.pow(profile.phi_over_t(t), e)
            },
            0.0,
            upper,
            q,
        )?;
        Ok(LogIntegral {
            ln_value: integral.value.ln(),
            rel_error: integral.rel_error(),
        })
    }
}

/// `ln int_t^inf phi_ext^e` for the profile continued by its tangent at `anchor`,
/// `t >= anchor`. Exact for the Euclidean profile, an upper bound otherwise.
pub(crate) fn ln_tangent_tail(m: &Manifold, e: f64, anchor: f64, t: f64) -> Result<LogIntegral> {
    if e >= -1.0 {
        return Err(Error::DivergentTail(format!(
            "int^inf phi^{e} diverges (needs p < n)"
        )));
    }
    let top = m.profile().eval_raw(anchor);
    let phi_t = top.phi + top.dphi * (t - anchor);
    Ok(LogIntegral {
        ln_value: (e + 1.0) * phi_t.ln() - top.dphi.ln() - (-e - 1.0).ln(),
        rel_error: 0.0,
    })
}

/// `ln int_r^R S^{1/(1-p)} dt`, whose `(1-p)`-th power is the capacity.
pub(crate) fn ln_condenser_integral(
    m: &Manifold,
    p: f64,
    c: Condenser,
    q: &QuadratureSettings,
) -> Result<LogIntegral> {
    let e = warp_exponent(m, p);
    let j = ln_warp_power(m, e, c.inner, c.outer, q)?;
    Ok(LogIntegral {
        ln_value: m.unit_area().ln() / (1.0 - p) + j.ln_value,
        rel_error: j.rel_error,
    })
}

/// Relative p-capacity of the ball condenser `c`.
pub fn ball_capacity(
    m: &Manifold,
    p: Exponent,
    c: Condenser,
    q: &QuadratureSettings,
) -> Result<CapacityValue> {
    if let Exponent::SubOne(_) = p {
        return Ok(CapacityValue {
            value: 0.0,
            ln_value: f64::NEG_INFINITY,
            rel_error: 0.0,
            regime: Regime::SubOne,
        });
    }
    c.check(m, p)?;
    match p {
        Exponent::SubOne(_) => unreachable!(),
        Exponent::One => Ok(CapacityValue::exact(m.area_raw(c.inner), Regime::One)),
        Exponent::Infinity => Ok(CapacityValue::exact(
            1.0 / (c.outer - c.inner),
            Regime::Infinity,
        )),
        Exponent::Finite(pv) if pv - 1.0 < NEAR_ONE => {
            warn!("p = {pv} is within {NEAR_ONE} of 1; using the p -> 1 limit S(r)");
            Ok(CapacityValue {
                regime: Regime::Finite,
                ..CapacityValue::exact(m.area_raw(c.inner), Regime::Finite)
            })
        }
        Exponent::Finite(pv) => {
            let li = ln_condenser_integral(m, pv, c, q)?;
            Ok(CapacityValue::from_ln(
                (1.0 - pv) * li.ln_value,
                (pv - 1.0) * li.rel_error,
            ))
        }
    }
}

/// Infimum of the (volume-weighted) relative capacity over centred balls
/// `Omega = B(o, R)`, `R <= R_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalCapacity {
    pub value: f64,
    pub ln_value: f64,
    /// Outer radius realising the infimum; `inf` when it is a limit `R -> inf`.
    pub argmin: f64,
    pub attained: bool,
    /// For `1 < p < n`: share of the tangent-continued tail beyond `R_max`.
    pub tail_fraction: f64,
    pub rel_error: f64,
}

/// Global capacity of `closed B(o, r)`:
///
/// * `1 <= p < n`: `lim_{R -> inf} cap_p(r, R)`;
/// * `p = n`: `inf_R |B_R| exp(-beta_n cap_n(r, R)^{1/(1-n)})`;
/// * `n < p < inf`: `inf_R |B_R|^{p/n - 1} cap_p(r, R)`;
/// * `p = inf`: `inf_R |B_R|^{1/n} / (R - r)`.
pub fn global_capacity(
    m: &Manifold,
    p: Exponent,
    r: f64,
    r_max: f64,
    q: &QuadratureSettings,
) -> Result<GlobalCapacity> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("global capacity needs r > 0, got {r}")));
    }
    if !(r_max > r) {
        return Err(Error::InvalidCondenser(format!(
            "R_max = {r_max} must exceed r = {r}"
        )));
    }
    m.check_radius(r_max)?;
    let n = m.n();
    let exact = |value: f64, argmin: f64, attained: bool| GlobalCapacity {
        value,
        ln_value: value.ln(),
        argmin,
        attained,
        tail_fraction: 0.0,
        rel_error: 0.0,
    };
    match p {
        Exponent::SubOne(_) => Err(Error::Regime(
            "global capacities are defined for p >= 1".into(),
        )),
        Exponent::One => Ok(exact(m.area_raw(r), r_max, true)),
        Exponent::Finite(pv) if pv < n => {
            if pv - 1.0 < NEAR_ONE {
                return Ok(exact(m.area_raw(r), r_max, true));
            }
            let e = warp_exponent(m, pv);
            let body = ln_warp_power(m, e, r, r_max, q)?;
            let tail = ln_tangent_tail(m, e, r_max, r_max)?;
            let total = body.add(tail);
            let tail_fraction = (tail.ln_value - total.ln_value).exp();
            if tail_fraction > MAX_TAIL_FRACTION {
                return Err(Error::HorizonTooSmall(format!(
                    "tail beyond R_max = {r_max} carries {:.1}% of the capacity integral; increase R_max",
                    100.0 * tail_fraction
                )));
            }
            let ln_value = (1.0 - pv) * (m.unit_area().ln() / (1.0 - pv) + total.ln_value);
            Ok(GlobalCapacity {
                value: ln_value.exp(),
                ln_value,
                argmin: f64::INFINITY,
                attained: false,
                tail_fraction,
                rel_error: (pv - 1.0) * total.rel_error,
            })
        }
        _ => {
            let objective = |gap: f64| -> Result<f64> {
                let outer = r + gap;
                let ln_vol = m.ball_volume(outer, q)?.ln();
                let c = Condenser::new(r, outer)?;
                match p {
                    Exponent::Finite(pv) if pv == n => {
                        let li = ln_condenser_integral(m, pv, c, q)?;
                        Ok(ln_vol - beta_n(m) * li.value())
                    }
                    Exponent::Finite(pv) => {
                        let cap = ball_capacity(m, p, c, q)?;
                        Ok((pv / n - 1.0) * ln_vol + cap.ln_value)
                    }
                    _ => Ok(ln_vol / n - gap.ln()),
                }
            };
            let lo = (r * 1e-6).ln();
            let hi = (r_max - r).ln();
            let best = scan_then_golden(|x| objective(x.exp()), lo, hi, SCAN_POINTS, 1e-10, 1e-12)?;
            let is_n = matches!(p, Exponent::Finite(pv) if pv == n);
            if is_n && (best.at_lower || best.flat) {
                // R -> r+ drives the exponential factor to 1: the limit is |B_r|.
                return Ok(exact(m.ball_volume(r, q)?, r, false));
            }
            let attained = !(best.at_lower || best.at_upper);
            Ok(GlobalCapacity {
                value: best.value.exp(),
                ln_value: best.value,
                argmin: r + best.x.exp(),
                attained,
                tail_fraction: 0.0,
                rel_error: q.rel_tol,
            })
        }
    }
}

/// `beta_n = n^{n/(n-1)} nu_n^{1/(n-1)}`.
pub fn beta_n(m: &Manifold) -> f64 {
    let n = m.n();
    n.powf(n / (n - 1.0)) * m.unit_volume().powf(1.0 / (n - 1.0))
}

/// Shape of a capacitary potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialForm {
    /// Potential of a ball condenser; vanishes at the outer radius.
    Bounded(Condenser),
    /// Potential of `closed B(o, r)` relative to the whole manifold (`1 < p < n`).
    Global { inner: f64 },
}

/// Radial p-capacitary potential, `1 - int_r^t phi^e / int_r^R phi^e`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitaryPotential {
    manifold: Manifold,
    p: f64,
    exponent: f64,
    inner: f64,
    /// `None` for the global form.
    outer: Option<f64>,
    ln_total: LogIntegral,
    q: QuadratureSettings,
}

impl CapacitaryPotential {
    pub fn new(
        m: &Manifold,
        p: Exponent,
        form: PotentialForm,
        q: &QuadratureSettings,
    ) -> Result<Self> {
        let Exponent::Finite(pv) = p else {
            return Err(Error::Regime(format!(
                "capacitary potentials need 1 < p < inf, got p = {p}"
            )));
        };
        let e = warp_exponent(m, pv);
        let (inner, outer, ln_total) = match form {
            PotentialForm::Bounded(c) => {
                c.check(m, p)?;
                (c.inner, Some(c.outer), ln_warp_power(m, e, c.inner, c.outer, q)?)
            }
            PotentialForm::Global { inner } => {
                if pv >= m.n() {
                    return Err(Error::DivergentTail(format!(
                        "the global potential needs p < n (p = {pv}, n = {})",
                        m.dim()
                    )));
                }
                if !(inner > 0.0) {
                    return Err(Error::Domain("global potential needs r > 0".into()));
                }
                let t_max = m.t_max();
                let body = ln_warp_power(m, e, inner, t_max, q)?;
                let tail = ln_tangent_tail(m, e, t_max, t_max)?;
                (inner, None, body.add(tail))
            }
        };
        Ok(Self {
            manifold: m.clone(),
            p: pv,
            exponent: e,
            inner,
            outer,
            ln_total,
            q: *q,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> Option<f64> {
        self.outer
    }

    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    /// `ln int_r^{R or inf} phi^e`.
    pub fn ln_total(&self) -> f64 {
        self.ln_total.ln_value
    }

    /// `ln int_t^{end} phi^e` for `t` past the inner radius.
    fn ln_remaining(&self, t: f64) -> Result<f64> {
        let m = &self.manifold;
        match self.outer {
            Some(outer) => Ok(ln_warp_power(m, self.exponent, t, outer, &self.q)?.ln_value),
            None => {
                let t_max = m.t_max();
                if t >= t_max {
                    Ok(ln_tangent_tail(m, self.exponent, t_max, t)?.ln_value)
                } else {
                    let body = ln_warp_power(m, self.exponent, t, t_max, &self.q)?;
                    let tail = ln_tangent_tail(m, self.exponent, t_max, t_max)?;
                    Ok(body.add(tail).ln_value)
                }
            }
        }
    }

    /// `ln int_r^t phi^e`.
    fn ln_covered(&self, t: f64) -> Result<f64> {
        let m = &self.manifold;
        if t <= m.t_max() {
            return Ok(ln_warp_power(m, self.exponent, self.inner, t, &self.q)?.ln_value);
        }
        let total = self.ln_total.ln_value;
        let rest = self.ln_remaining(t)?;
        Ok(total + (-(rest - total).exp()).ln_1p())
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        if t <= self.inner {
            return Ok(1.0);
        }
        if let Some(outer) = self.outer {
            if t >= outer {
                return Ok(0.0);
            }
        }
        let midpoint = match self.outer {
            Some(outer) => 0.5 * (self.inner + outer),
            None => 2.0 * self.inner,
        };
        let total = self.ln_total.ln_value;
        if t > midpoint {
            Ok((self.ln_remaining(t)? - total).exp().clamp(0.0, 1.0))
        } else {
            Ok((1.0 - (self.ln_covered(t)? - total).exp()).clamp(0.0, 1.0))
        }
    }

    /// `d/dt` of the potential, `-phi(t)^e / int phi^e` on the shell.
    pub fn slope(&self, t: f64) -> f64 {
        if t < self.inner || self.outer.is_some_and(|o| t > o) {
            return 0.0;
        }
        let phi = self.manifold.profile().phi_extended(t);
        -(self.exponent * phi.ln() - self.ln_total.ln_value).exp()
    }

    /// Largest `t` with `value(t) >= level`, for `0 < level <= 1`.
    pub fn level_radius(&self, level: f64) -> Result<f64> {
        if level >= 1.0 {
            return Ok(self.inner);
        }
        let mut lo = self.inner;
        let mut hi = match self.outer {
            Some(outer) => outer,
            None => {
                let t_max = self.manifold.t_max();
                if self.value(t_max)? > level {
                    return Err(Error::Horizon { t: f64::NAN, t_max });
                }
                t_max
            }
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.value(mid)? >= level {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        Ok(lo)
    }
}

/// Value of the capacitary potential at distance `t` from the centre.
pub fn capacitary_potential(
    m: &Manifold,
    p: Exponent,
    form: PotentialForm,
    t: f64,
    q: &QuadratureSettings,
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    CapacitaryPotential::new(m, p, form, q)?.value(t)
}

/// `exp(-beta cap_n(r, R)^{1/(1-n)})`.
pub fn exp_capacity_functional(
    m: &Manifold,
    beta: f64,
    c: Condenser,
    q: &QuadratureSettings,
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    if c.inner == 0.0 {
        return Err(Error::DivergentCondenser("the n-capacity functional needs r > 0".into()));
    }
    c.check(m, Exponent::Finite(m.n()))?;
    let li = ln_condenser_integral(m, m.n(), c, q)?;
    Ok((-beta * li.value()).exp())
}
