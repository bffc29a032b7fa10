//! Geometry of the warped product `(0, inf) x S^{n-1}` with metric
//! `dt^2 + phi(t)^2 g_{S^{n-1}}`.
//!
//! Warping functions are restricted to analytic forms with exact derivatives:
//! the Euclidean profile `phi(t) = t`, the hyperbolic profile `phi(t) = sinh t`
//! and odd power series `t + c3 t^3 + c5 t^5 + ...` with nonnegative
//! coefficients. All satisfy `phi(0) = 0`, `phi'(0) = 1`; construction checks
//! `phi'' >= 0` on the validity horizon `(0, t_max]`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureSettings};

/// Default validity horizon for profiles.
pub const DEFAULT_T_MAX: f64 = 50.0;

/// Number of Chebyshev-distributed samples used to certify `phi'' >= 0`.
const CONVEXITY_SAMPLES: usize = 10_000;

/// Convexity violations smaller than this are treated as round-off.
const CONVEXITY_TOL: f64 = 1e-14;

/// Volume of the Euclidean unit ball in `R^n`, `pi^{n/2} / Gamma(n/2 + 1)`.
///
/// `n = 1` is accepted here (the constant 2) even though manifolds need `n >= 2`.
pub fn unit_ball_volume(n: i64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidDimension(n, 1));
    }
    let half = n as f64 / 2.0;
    Ok(PI.powf(half) / gamma(half + 1.0))
}

/// Manifold dimension, `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n as i64, 2));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Dimension::new(n)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The analytic family a profile belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Euclidean,
    Hyperbolic,
    /// `phi(t) = t + sum_k c_{2k+1} t^{2k+1}`; holds `[c3, c5, ...]`.
    OddSeries(Vec<f64>),
}

impl ProfileKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Euclidean => "euclidean",
            ProfileKind::Hyperbolic => "hyperbolic",
            ProfileKind::OddSeries(_) => "odd-series",
        }
    }
}

/// JSON profile description:
/// `{"kind":"euclidean"}`, `{"kind":"hyperbolic"}` or
/// `{"kind":"odd-series","coefficients":[c3,c5,...]}`, each with optional `t_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileSpec {
    Euclidean {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_max: Option<f64>,
    },
    Hyperbolic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_max: Option<f64>,
    },
    OddSeries {
        coefficients: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_max: Option<f64>,
    },
}

impl ProfileSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Parse("empty profile spec".into()));
        }
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Value and first two derivatives of the warping function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WarpValue {
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
}

/// A validated warping function.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpProfile {
    kind: ProfileKind,
    t_max: f64,
}

impl WarpProfile {
    pub fn euclidean() -> Self {
        Self {
            kind: ProfileKind::Euclidean,
            t_max: DEFAULT_T_MAX,
        }
    }

    pub fn hyperbolic() -> Self {
        Self {
            kind: ProfileKind::Hyperbolic,
            t_max: DEFAULT_T_MAX,
        }
    }

    pub fn odd_series(coefficients: Vec<f64>) -> Result<Self> {
        Self::new(ProfileKind::OddSeries(coefficients), DEFAULT_T_MAX)
    }

    /// Builds and validates a profile.
    pub fn new(kind: ProfileKind, t_max: f64) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::Domain(format!("t_max must be positive and finite, got {t_max}")));
        }
        if let ProfileKind::OddSeries(coefficients) = &kind {
            for (i, &c) in coefficients.iter().enumerate() {
                if !c.is_finite() {
                    return Err(Error::Parse(format!("coefficient c{} is not finite", 2 * i + 3)));
                }
                if c < 0.0 {
                    return Err(Error::ConvexityViolation(format!(
                        "coefficient c{} = {c} is negative",
                        2 * i + 3
                    )));
                }
            }
        }
        let profile = Self { kind, t_max };
        profile.check_convexity()?;
        let top = profile.eval_raw(t_max);
        if !(top.phi.is_finite() && top.dphi.is_finite() && top.ddphi.is_finite()) {
            return Err(Error::Domain(format!("profile overflows before t_max = {t_max}")));
        }
        Ok(profile)
    }

    pub fn from_spec(spec: &ProfileSpec) -> Result<Self> {
        match spec {
            ProfileSpec::Euclidean { t_max } => {
                Self::new(ProfileKind::Euclidean, t_max.unwrap_or(DEFAULT_T_MAX))
            }
            ProfileSpec::Hyperbolic { t_max } => {
                Self::new(ProfileKind::Hyperbolic, t_max.unwrap_or(DEFAULT_T_MAX))
            }
            ProfileSpec::OddSeries {
                coefficients,
                t_max,
            } => Self::new(
                ProfileKind::OddSeries(coefficients.clone()),
                t_max.unwrap_or(DEFAULT_T_MAX),
            ),
        }
    }

    /// Parses `euclidean`, `hyperbolic`, or a path to a JSON spec file.
    pub fn from_arg(arg: &str) -> Result<Self> {
        match arg.trim() {
            "" => Err(Error::Parse("empty profile spec".into())),
            "euclidean" => Ok(Self::euclidean()),
            "hyperbolic" => Ok(Self::hyperbolic()),
            s if s.starts_with('{') => Self::from_spec(&ProfileSpec::from_json(s)?),
            path => {
                let text = std::fs::read_to_string(Path::new(path))
                    .map_err(|e| Error::Parse(format!("cannot read profile file {path}: {e}")))?;
                Self::from_spec(&ProfileSpec::from_json(&text)?)
            }
        }
    }

    pub fn with_t_max(self, t_max: f64) -> Result<Self> {
        Self::new(self.kind, t_max)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn spec(&self) -> ProfileSpec {
        let t_max = Some(self.t_max);
        match &self.kind {
            ProfileKind::Euclidean => ProfileSpec::Euclidean { t_max },
            ProfileKind::Hyperbolic => ProfileSpec::Hyperbolic { t_max },
            ProfileKind::OddSeries(c) => ProfileSpec::OddSeries {
                coefficients: c.clone(),
                t_max,
            },
        }
    }

    /// `(phi, phi', phi'')` at `t`, `0 <= t <= t_max`.
    pub fn warp_eval(&self, t: f64) -> Result<WarpValue> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("warp_eval needs t >= 0, got {t}")));
        }
        if t > self.t_max {
            return Err(Error::Horizon {
                t,
                t_max: self.t_max,
            });
        }
        Ok(self.eval_raw(t))
    }

    pub(crate) fn eval_raw(&self, t: f64) -> WarpValue {
        match &self.kind {
            ProfileKind::Euclidean => WarpValue {
                phi: t,
                dphi: 1.0,
                ddphi: 0.0,
            },
            ProfileKind::Hyperbolic => WarpValue {
                phi: t.sinh(),
                dphi: t.cosh(),
                ddphi: t.sinh(),
            },
            ProfileKind::OddSeries(c) => {
                let t2 = t * t;
                let mut phi = t;
                let mut dphi = 1.0;
                let mut ddphi = 0.0;
                // power = t^{k-2} with k = 3, 5, ...
                let mut power = t;
                for (i, &ck) in c.iter().enumerate() {
                    let k = (2 * i + 3) as f64;
                    ddphi += ck * k * (k - 1.0) * power;
                    dphi += ck * k * power * t;
                    phi += ck * power * t2;
                    power *= t2;
                }
                WarpValue { phi, dphi, ddphi }
            }
        }
    }

    #[inline]
    pub(crate) fn phi(&self, t: f64) -> f64 {
        match &self.kind {
            ProfileKind::Euclidean => t,
            ProfileKind::Hyperbolic => t.sinh(),
            ProfileKind::OddSeries(_) => self.eval_raw(t).phi,
        }
    }

    /// `phi(t) / t`, continuous at `t = 0` where it equals 1.
    pub(crate) fn phi_over_t(&self, t: f64) -> f64 {
        match &self.kind {
            ProfileKind::Euclidean => 1.0,
            ProfileKind::Hyperbolic => {
                if t.abs() < 1e-4 {
                    let t2 = t * t;
                    1.0 + t2 / 6.0 * (1.0 + t2 / 20.0)
                } else {
                    t.sinh() / t
                }
            }
            ProfileKind::OddSeries(c) => {
                let t2 = t * t;
                let mut acc = 1.0;
                let mut power = t2;
                for &ck in c {
                    acc += ck * power;
                    power *= t2;
                }
                acc
            }
        }
    }

    /// Tangent-line continuation past `t_max`: `phi(T) + phi'(T) (t - T)`.
    ///
    /// Only used for improper integrals over `[t_max, inf)`; the continued
    /// profile is still convex, and exact for the Euclidean profile.
    pub(crate) fn phi_extended(&self, t: f64) -> f64 {
        if t <= self.t_max {
            self.phi(t)
        } else {
            let top = self.eval_raw(self.t_max);
            top.phi + top.dphi * (t - self.t_max)
        }
    }

    fn check_convexity(&self) -> Result<()> {
        if matches!(self.kind, ProfileKind::Euclidean) {
            return Ok(());
        }
        let half = 0.5 * self.t_max;
        for k in 0..CONVEXITY_SAMPLES {
            let theta = PI * (k as f64 + 0.5) / CONVEXITY_SAMPLES as f64;
            let t = half * (1.0 - theta.cos());
            let v = self.eval_raw(t);
            if v.ddphi < -CONVEXITY_TOL * v.phi.abs().max(1.0) {
                return Err(Error::ConvexityViolation(format!(
                    "phi''({t}) = {} < 0",
                    v.ddphi
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for WarpProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ProfileKind::OddSeries(c) => write!(f, "odd-series{c:?}"),
            k => f.write_str(k.name()),
        }
    }
}

/// A rotationally symmetric manifold: a warping profile plus a dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifold {
    profile: WarpProfile,
    dim: Dimension,
    unit_volume: f64,
}

impl Manifold {
    pub fn new(profile: WarpProfile, dim: Dimension) -> Self {
        let unit_volume =
            unit_ball_volume(dim.get() as i64).expect("dimension is at least 2");
        Self {
            profile,
            dim,
            unit_volume,
        }
    }

    pub fn euclidean(n: u32) -> Result<Self> {
        Ok(Self::new(WarpProfile::euclidean(), Dimension::new(n)?))
    }

    pub fn hyperbolic(n: u32) -> Result<Self> {
        Ok(Self::new(WarpProfile::hyperbolic(), Dimension::new(n)?))
    }

    pub fn profile(&self) -> &WarpProfile {
        &self.profile
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn n(&self) -> f64 {
        self.dim.as_f64()
    }

    /// `nu_n`, the Euclidean unit-ball volume.
    pub fn unit_volume(&self) -> f64 {
        self.unit_volume
    }

    /// `n nu_n`, the Euclidean unit-sphere area.
    pub fn unit_area(&self) -> f64 {
        self.n() * self.unit_volume
    }

    pub fn t_max(&self) -> f64 {
        self.profile.t_max
    }

    pub(crate) fn check_radius(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("radius must be nonnegative, got {t}")));
        }
        if t > self.profile.t_max {
            return Err(Error::Horizon {
                t,
                t_max: self.profile.t_max,
            });
        }
        Ok(())
    }

    /// Area of the geodesic sphere of radius `t`, `n nu_n phi(t)^{n-1}`.
    pub fn sphere_area(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("sphere_area needs t > 0, got {t}")));
        }
        self.check_radius(t)?;
        Ok(self.area_raw(t))
    }

    #[inline]
    pub(crate) fn area_raw(&self, t: f64) -> f64 {
        self.unit_area() * self.profile.phi(t).powi(self.dim.get() as i32 - 1)
    }

    /// Sphere area under the tangent continuation, valid for any `t >= 0`.
    pub(crate) fn area_extended(&self, t: f64) -> f64 {
        self.unit_area() * self.profile.phi_extended(t).powi(self.dim.get() as i32 - 1)
    }

    /// Ball volume under the tangent continuation, valid for any `t >= 0`.
    pub(crate) fn ball_volume_extended(&self, t: f64, q: &QuadratureSettings) -> Result<f64> {
        let t_max = self.profile.t_max;
        if t <= t_max {
            return self.ball_volume(t, q);
        }
        let top = self.profile.eval_raw(t_max);
        let phi_t = top.phi + top.dphi * (t - t_max);
        let n = self.n();
        let shell = self.unit_volume * (phi_t.powf(n) - top.phi.powf(n)) / top.dphi;
        Ok(self.ball_volume(t_max, q)? + shell)
    }

    /// Volume of the geodesic ball of radius `r`.
    pub fn ball_volume(&self, r: f64, q: &QuadratureSettings) -> Result<f64> {
        self.check_radius(r)?;
        Ok(self.unit_area() * self.warp_moment(r, q)?)
    }

    /// `int_0^r phi^{n-1}`.
    pub(crate) fn warp_moment(&self, r: f64, q: &QuadratureSettings) -> Result<f64> {
        if r == 0.0 {
            return Ok(0.0);
        }
        let k = self.dim.get() as i32 - 1;
        let integral = integrate(|t| self.profile.phi(t).powi(k), 0.0, r, q)?;
        Ok(integral.value)
    }

    /// Radius of the centred ball with volume `v`.
    pub fn inverse_volume(&self, v: f64, q: &QuadratureSettings) -> Result<f64> {
        if !(v > 0.0) {
            return Err(Error::Domain(format!("inverse_volume needs v > 0, got {v}")));
        }
        let t_max = self.profile.t_max;
        let v_max = self.ball_volume(t_max, q)?;
        if v > v_max * (1.0 + 1e-15) {
            return Err(Error::Domain(format!(
                "volume {v} exceeds the horizon volume {v_max} at t_max = {t_max}"
            )));
        }
        let mut lo = 0.0;
        let mut hi = t_max;
        let mut r = (v / self.unit_volume)
            .powf(1.0 / self.n())
            .clamp(0.0, t_max);
        if r == 0.0 {
            r = 0.5 * t_max;
        }
        for _ in 0..200 {
            let f = self.ball_volume(r, q)? - v;
            if f.abs() <= 0.1 * q.rel_tol * v {
                return Ok(r);
            }
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let slope = self.area_raw(r);
            let mut next = r - f / slope;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - r).abs() <= 1e-15 * r.max(1e-300) {
                return Ok(next);
            }
            r = next;
        }
        Err(Error::Convergence(format!("inverse_volume({v}) did not converge")))
    }

    /// Isoperimetric function `I(v)`: area of the centred sphere enclosing volume `v`.
    pub fn isoperimetric(&self, v: f64, q: &QuadratureSettings) -> Result<f64> {
        let r = self.inverse_volume(v, q)?;
        self.sphere_area(r)
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n = {})", self.profile, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn q() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    /// nu_n through nu_n = (2 pi / n) nu_{n-2}, nu_0 = 1, nu_1 = 2.
    fn recursive_volume(n: i64) -> f64 {
        match n {
            0 => 1.0,
            1 => 2.0,
            _ => 2.0 * PI / n as f64 * recursive_volume(n - 2),
        }
    }

    #[test]
    fn unit_ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2).unwrap(), PI, max_relative = 1e-14);
        assert_relative_eq!(unit_ball_volume(1).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(unit_ball_volume(4).unwrap(), PI * PI / 2.0, max_relative = 1e-14);
        for n in 1..12 {
            assert_relative_eq!(
                unit_ball_volume(n).unwrap(),
                recursive_volume(n),
                max_relative = 1e-13
            );
        }
        assert!(matches!(unit_ball_volume(0), Err(Error::InvalidDimension(0, 1))));
        assert!(unit_ball_volume(-3).is_err());
    }

    #[test]
    fn dimension_rejects_one() {
        assert!(Dimension::new(1).is_err());
        assert_eq!(Dimension::new(3).unwrap().get(), 3);
    }

    #[test]
    fn builtin_profiles() {
        let e = WarpProfile::euclidean();
        let v = e.warp_eval(1.0).unwrap();
        assert_eq!((v.phi, v.dphi, v.ddphi), (1.0, 1.0, 0.0));
        let v = e.warp_eval(0.7).unwrap();
        assert_eq!((v.phi, v.dphi, v.ddphi), (0.7, 1.0, 0.0));

        let h = WarpProfile::hyperbolic();
        assert_relative_eq!(h.warp_eval(1.0).unwrap().phi, 1.175_201_193_643_801_4, max_relative = 1e-15);
        let v = h.warp_eval(0.0).unwrap();
        assert_eq!((v.phi, v.dphi, v.ddphi), (0.0, 1.0, 0.0));
    }

    #[test]
    fn odd_series_derivatives() {
        let p = WarpProfile::odd_series(vec![1.0 / 6.0]).unwrap();
        let v = p.warp_eval(1.0).unwrap();
        assert_relative_eq!(v.phi, 7.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(v.dphi, 1.5, max_relative = 1e-15);
        assert_relative_eq!(v.ddphi, 1.0, max_relative = 1e-15);

        let p = WarpProfile::odd_series(vec![0.5, 0.25]).unwrap();
        let t: f64 = 1.3;
        let v = p.warp_eval(t).unwrap();
        assert_relative_eq!(v.phi, t + 0.5 * t.powi(3) + 0.25 * t.powi(5), max_relative = 1e-14);
        assert_relative_eq!(v.dphi, 1.0 + 1.5 * t * t + 1.25 * t.powi(4), max_relative = 1e-14);
        assert_relative_eq!(v.ddphi, 3.0 * t + 5.0 * t.powi(3), max_relative = 1e-14);
        assert_relative_eq!(p.phi_over_t(t), v.phi / t, max_relative = 1e-14);
    }

    #[test]
    fn negative_coefficient_is_a_convexity_violation() {
        let err = WarpProfile::odd_series(vec![-0.1]).unwrap_err();
        assert!(matches!(err, Error::ConvexityViolation(_)));
    }

    #[test]
    fn json_specs() {
        let p = WarpProfile::from_spec(&ProfileSpec::from_json(r#"{"kind":"euclidean"}"#).unwrap()).unwrap();
        assert_eq!(p, WarpProfile::euclidean());
        let p = WarpProfile::from_spec(
            &ProfileSpec::from_json(r#"{"kind":"odd-series","coefficients":[0.1,0.01],"t_max":5}"#).unwrap(),
        )
        .unwrap();
        assert_eq!(p.t_max(), 5.0);
        assert!(matches!(ProfileSpec::from_json(""), Err(Error::Parse(_))));
        assert!(matches!(ProfileSpec::from_json(r#"{"kind":"sphere"}"#), Err(Error::Parse(_))));
        let bad = ProfileSpec::from_json(r#"{"kind":"odd-series","coefficients":[0.2,-1]}"#).unwrap();
        assert!(matches!(WarpProfile::from_spec(&bad), Err(Error::ConvexityViolation(_))));
        // hyperbolic overflows long before t = 1000
        assert!(WarpProfile::hyperbolic().with_t_max(1000.0).is_err());
    }

    #[test]
    fn horizon_and_domain_errors() {
        let p = WarpProfile::euclidean().with_t_max(2.0).unwrap();
        assert!(matches!(p.warp_eval(3.0), Err(Error::Horizon { .. })));
        let m = Manifold::new(p, Dimension::new(3).unwrap());
        assert!(matches!(m.sphere_area(0.0), Err(Error::Domain(_))));
        assert!(matches!(m.ball_volume(2.5, &q()), Err(Error::Horizon { .. })));
        assert!(m.inverse_volume(1e6, &q()).is_err());
    }

    #[test]
    fn sphere_areas() {
        let e3 = Manifold::euclidean(3).unwrap();
        assert_relative_eq!(e3.sphere_area(2.0).unwrap(), 16.0 * PI, max_relative = 1e-14);
        let e2 = Manifold::euclidean(2).unwrap();
        assert_relative_eq!(e2.sphere_area(1.0).unwrap(), 2.0 * PI, max_relative = 1e-14);
        let h2 = Manifold::hyperbolic(2).unwrap();
        assert_relative_eq!(h2.sphere_area(1.0).unwrap(), 2.0 * PI * 1f64.sinh(), max_relative = 1e-14);
    }

    #[test]
    fn ball_volumes() {
        let e3 = Manifold::euclidean(3).unwrap();
        assert_relative_eq!(e3.ball_volume(1.0, &q()).unwrap(), 4.0 * PI / 3.0, max_relative = 1e-13);
        assert_eq!(e3.ball_volume(0.0, &q()).unwrap(), 0.0);
        let e2 = Manifold::euclidean(2).unwrap();
        assert_relative_eq!(e2.ball_volume(2.0, &q()).unwrap(), 4.0 * PI, max_relative = 1e-13);
        let h2 = Manifold::hyperbolic(2).unwrap();
        assert_relative_eq!(
            h2.ball_volume(1.0, &q()).unwrap(),
            2.0 * PI * (1f64.cosh() - 1.0),
            max_relative = 1e-12
        );
        // n = 4 hyperbolic: 2 pi^2 int sinh^3 = 2 pi^2 (cosh^3/3 - cosh + 2/3)
        let h4 = Manifold::hyperbolic(4).unwrap();
        let c = 2f64.cosh();
        assert_relative_eq!(
            h4.ball_volume(2.0, &q()).unwrap(),
            2.0 * PI * PI * (c.powi(3) / 3.0 - c + 2.0 / 3.0),
            max_relative = 1e-11
        );
    }

    #[test]
    fn inverse_volumes() {
        let e2 = Manifold::euclidean(2).unwrap();
        assert_relative_eq!(e2.inverse_volume(PI, &q()).unwrap(), 1.0, max_relative = 1e-9);
        let e3 = Manifold::euclidean(3).unwrap();
        assert_relative_eq!(
            e3.inverse_volume(4.0 * PI / 3.0 * 0.125, &q()).unwrap(),
            0.5,
            max_relative = 1e-9
        );
        let h2 = Manifold::hyperbolic(2).unwrap();
        let v = 2.0 * PI * (2f64.cosh() - 1.0);
        assert_relative_eq!(h2.inverse_volume(v, &q()).unwrap(), 2.0, max_relative = 1e-9);
        assert!(matches!(e2.inverse_volume(0.0, &q()), Err(Error::Domain(_))));
    }

    #[test]
    fn small_radius_asymptotics() {
        for m in [Manifold::euclidean(3).unwrap(), Manifold::hyperbolic(3).unwrap()] {
            let r = 1e-4;
            let ratio = m.ball_volume(r, &q()).unwrap() / (m.unit_volume() * r.powi(3));
            assert!((1.0 - 1e-12..=1.0 + 1e-6).contains(&ratio), "{m}: {ratio}");
        }
    }

    fn arb_manifold() -> impl Strategy<Value = Manifold> {
        (0usize..3, 2u32..6, 0.0f64..1.0).prop_map(|(k, n, c)| {
            let profile = match k {
                0 => WarpProfile::euclidean(),
                1 => WarpProfile::hyperbolic(),
                _ => WarpProfile::odd_series(vec![c, c * c / 10.0]).unwrap(),
            }
            .with_t_max(5.0)
            .unwrap();
            Manifold::new(profile, Dimension::new(n).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn area_is_monotone_and_dominates_euclidean(m in arb_manifold(), a in 0.01f64..5.0, b in 0.01f64..5.0) {
            let (t1, t2) = if a < b { (a, b) } else { (b, a) };
            let s1 = m.sphere_area(t1).unwrap();
            let s2 = m.sphere_area(t2).unwrap();
            prop_assert!(s1 <= s2);
            prop_assert!(s1 >= m.unit_area() * t1.powi(m.dim().get() as i32 - 1) * (1.0 - 1e-14));
            let v = m.ball_volume(t1, &q()).unwrap();
            prop_assert!(v >= m.unit_volume() * t1.powi(m.dim().get() as i32) * (1.0 - 1e-12));
        }

        #[test]
        fn volume_round_trip(m in arb_manifold(), log_r in (1e-3f64).ln()..(5.0f64).ln()) {
            let r = log_r.exp();
            let v = m.ball_volume(r, &q()).unwrap();
            let back = m.inverse_volume(v, &q()).unwrap();
            prop_assert!(((back - r) / r).abs() <= 10.0 * q().rel_tol, "{} vs {}", back, r);
        }
    }
}
