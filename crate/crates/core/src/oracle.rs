//! Independent ground truth for the quadrature path: Euclidean closed forms
//! and direct minimisation of the discretised p-Dirichlet condenser energy.

use log::debug;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::capacity::{Condenser, Exponent};
use crate::error::{Error, Result};
use crate::geometry::{unit_ball_volume, Dimension, Manifold};
use crate::optimize::solve_tridiagonal;

/// Smallest admissible number of grid intervals.
pub const MIN_INTERVALS: usize = 64;

const MAX_NEWTON_STEPS: usize = 500;
const ENERGY_RTOL: f64 = 1e-12;

/// Euclidean ball-condenser capacity in closed form.
pub fn euclidean_closed_form(n: Dimension, p: Exponent, r: f64, big_r: f64) -> Result<f64> {
    let c = Condenser::new(r, big_r)?;
    let nf = n.as_f64();
    let area = nf * unit_ball_volume(n.get() as i64)?;
    let needs_positive = |what: &str| {
        if c.inner() == 0.0 {
            Err(Error::DivergentCondenser(format!("r = 0 diverges for {what}")))
        } else {
            Ok(())
        }
    };
    match p {
        Exponent::SubOne(_) => Ok(0.0),
        Exponent::One => {
            needs_positive("p = 1")?;
            Ok(area * r.powf(nf - 1.0))
        }
        Exponent::Infinity => Ok(1.0 / (big_r - r)),
        Exponent::Finite(pv) if pv == nf => {
            needs_positive("p = n")?;
            Ok(area * (big_r / r).ln().powf(1.0 - nf))
        }
        Exponent::Finite(pv) => {
            if pv < nf {
                needs_positive("1 < p < n")?;
            }
            let a = (pv - nf) / (pv - 1.0);
            let gap = (r.powf(a) - big_r.powf(a)).abs();
            Ok(area * ((pv - 1.0) / (pv - nf).abs()).powf(1.0 - pv) * gap.powf(1.0 - pv))
        }
    }
}

/// Piecewise-linear radial profile with pinned boundary values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteProfile {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

/// `N + 1` geometrically spaced nodes from `r` to `R`.
pub fn geometric_nodes(r: f64, big_r: f64, intervals: usize) -> Vec<f64> {
    let ratio = (big_r / r).ln() / intervals as f64;
    let mut nodes: Vec<f64> = (0..=intervals).map(|i| r * (ratio * i as f64).exp()).collect();
    nodes[0] = r;
    nodes[intervals] = big_r;
    nodes
}

/// `sum |(f_{i+1} - f_i) / h_i|^p S(midpoint_i) h_i`.
pub fn discrete_energy(m: &Manifold, p: f64, profile: &DiscreteProfile) -> Result<f64> {
    let DiscreteProfile { nodes, values } = profile;
    if nodes.len() != values.len() || nodes.len() < 2 {
        return Err(Error::Domain("nodes and values must have equal length >= 2".into()));
    }
    let mut energy = 0.0;
    for i in 0..nodes.len() - 1 {
        let h = nodes[i + 1] - nodes[i];
        if !(h > 0.0) {
            return Err(Error::Domain("nodes must be strictly increasing".into()));
        }
        let s = m.sphere_area(0.5 * (nodes[i] + nodes[i + 1]))?;
        energy += ((values[i + 1] - values[i]) / h).abs().powf(p) * s * h;
    }
    Ok(energy)
}

/// Starting point of the descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    /// Linear in the node index.
    Linear,
    /// Sorted uniform draws from a seeded SplitMix64 stream.
    Random(u64),
}

/// Result of [`discrete_condenser_energy`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteEnergy {
    pub energy: f64,
    pub iterations: usize,
    /// Relative energy change of the final Newton step.
    pub last_change: f64,
    #[serde(skip)]
    pub profile: DiscreteProfile,
}

/// Minimises the discrete condenser energy from a linear start.
pub fn discrete_condenser_energy(
    m: &Manifold,
    p: f64,
    c: Condenser,
    intervals: usize,
) -> Result<DiscreteEnergy> {
    discrete_condenser_energy_from(m, p, c, intervals, Start::Linear)
}

/// Damped Newton on the interior values; the Hessian is tridiagonal.
pub fn discrete_condenser_energy_from(
    m: &Manifold,
    p: f64,
    c: Condenser,
    intervals: usize,
    start: Start,
) -> Result<DiscreteEnergy> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Regime(format!(
            "the discrete oracle needs 1 < p < inf, got p = {p}"
        )));
    }
    if intervals < MIN_INTERVALS {
        return Err(Error::Domain(format!(
            "need at least {MIN_INTERVALS} intervals, got {intervals}"
        )));
    }
    if c.inner() == 0.0 {
        return Err(Error::Domain("the discrete oracle needs r > 0".into()));
    }
    m.sphere_area(c.outer())?;
    let nodes = geometric_nodes(c.inner(), c.outer(), intervals);
    let h: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    let weight: Vec<f64> = nodes
        .windows(2)
        .zip(&h)
        .map(|(w, &hi)| m.sphere_area(0.5 * (w[0] + w[1])).map(|s| s * hi.powf(1.0 - p)))
        .collect::<Result<_>>()?;

    let mut f: Vec<f64> = match start {
        Start::Linear => (0..=intervals)
            .map(|i| 1.0 - i as f64 / intervals as f64)
            .collect(),
        Start::Random(seed) => {
            let mut rng = SplitMix64::seed_from_u64(seed);
            let mut inner: Vec<f64> = (1..intervals).map(|_| rng.random::<f64>()).collect();
            inner.sort_by(|a, b| b.total_cmp(a));
            let mut v = Vec::with_capacity(intervals + 1);
            v.push(1.0);
            v.extend(inner);
            v.push(0.0);
            v
        }
    };

    let energy_of = |f: &[f64]| -> f64 {
        f.windows(2)
            .zip(&weight)
            .map(|(w, a)| a * (w[1] - w[0]).abs().powf(p))
            .sum()
    };
    let floor = 1e-8 / intervals as f64;
    let mut energy = energy_of(&f);
    let mut last_change = f64::INFINITY;
    for iteration in 1..=MAX_NEWTON_STEPS {
        // per-segment first and second derivatives in d_i = f_{i+1} - f_i
        let mut d1 = Vec::with_capacity(intervals);
        let mut d2 = Vec::with_capacity(intervals);
        for (w, a) in f.windows(2).zip(&weight) {
            let d = w[1] - w[0];
            let ad = d.abs().max(floor);
            d1.push(p * a * ad.powf(p - 2.0) * d);
            d2.push(p * (p - 1.0) * a * ad.powf(p - 2.0));
        }
        let interior = intervals - 1;
        let grad: Vec<f64> = (1..=interior).map(|j| d1[j - 1] - d1[j]).collect();
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let newton_step = |curvature: &[f64]| {
            let diag: Vec<f64> = (1..=interior).map(|j| curvature[j - 1] + curvature[j]).collect();
            let off: Vec<f64> = (1..interior).map(|j| -curvature[j]).collect();
            solve_tridiagonal(&off, &diag, &off, &neg)
                .ok_or_else(|| Error::Convergence("singular Newton system".into()))
        };
        let step = newton_step(&d2)?;
        let decrement: f64 = step.iter().zip(&grad).map(|(s, g)| -s * g).sum();
        let apply = |step: &[f64], t: f64, trial: &mut Vec<f64>| {
            for j in 1..=interior {
                trial[j] = f[j] + t * step[j - 1];
            }
        };

        let mut trial = f.clone();
        let mut t = 1.0;
        let mut accepted = loop {
            apply(&step, t, &mut trial);
            let e = energy_of(&trial);
            if e <= energy - 1e-4 * t * decrement.max(0.0) {
                break Some(e);
            }
            t *= 0.5;
            if t < 1e-12 {
                break None;
            }
        };
        if p < 2.0 {
            // for p < 2 the quadratic with curvature p |d|^{p-2} majorises |d|^p,
            // so its minimiser never overshoots through d = 0
            let majorant: Vec<f64> = d2.iter().map(|c| c / (p - 1.0)).collect();
            let mm = newton_step(&majorant)?;
            let mut mm_trial = f.clone();
            apply(&mm, 1.0, &mut mm_trial);
            let e = energy_of(&mm_trial);
            if e < energy && accepted.is_none_or(|best| e < best) {
                accepted = Some(e);
                trial = mm_trial;
            }
        }
        let Some(new_energy) = accepted.filter(|e| *e < energy) else {
            // no descent possible at working precision
            last_change = 0.0;
            debug!("discrete oracle stalled at iteration {iteration}, energy {energy}");
            return Ok(DiscreteEnergy {
                energy,
                iterations: iteration,
                last_change,
                profile: DiscreteProfile { nodes, values: f },
            });
        };
        last_change = (energy - new_energy).abs() / new_energy;
        std::mem::swap(&mut f, &mut trial);
        energy = new_energy;
        if last_change < ENERGY_RTOL && decrement.abs() < 1e-10 * energy {
            return Ok(DiscreteEnergy {
                energy,
                iterations: iteration,
                last_change,
                profile: DiscreteProfile { nodes, values: f },
            });
        }
    }
    Err(Error::Convergence(format!(
        "discrete oracle: {MAX_NEWTON_STEPS} Newton steps, energy {energy}, last relative change {last_change:e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::ball_capacity;
    use crate::quadrature::QuadratureSettings;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    #[test]
    fn closed_forms() {
        let d = |n| Dimension::new(n).unwrap();
        let f = Exponent::Finite;
        assert_relative_eq!(euclidean_closed_form(d(3), f(2.0), 0.5, 1.0).unwrap(), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(euclidean_closed_form(d(2), f(3.0), 0.0, 1.0).unwrap(), PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(euclidean_closed_form(d(2), f(2.0), 1.0, E).unwrap(), 2.0 * PI, max_relative = 1e-14);
        assert!(euclidean_closed_form(d(3), f(2.0), 0.0, 1.0).is_err());
        assert!(euclidean_closed_form(d(3), f(2.0), 1.0, 0.5).is_err());
    }

    #[test]
    fn discrete_energy_from_above() {
        let m = Manifold::euclidean(3).unwrap();
        let c = Condenser::new(0.5, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for n in [256, 1024, 4096] {
            let d = discrete_condenser_energy(&m, 2.0, c, n).unwrap();
            assert!(d.energy >= 4.0 * PI - 1e-12);
            assert!(d.energy < prev);
            prev = d.energy;
        }
        assert!((prev - 4.0 * PI) / (4.0 * PI) < 1e-3);
    }

    #[test]
    fn hyperbolic_cross_validation() {
        let m = Manifold::hyperbolic(2).unwrap();
        let c = Condenser::new(0.5, 2.0).unwrap();
        let d = discrete_condenser_energy(&m, 1.5, c, 4096).unwrap();
        let q = ball_capacity(&m, Exponent::Finite(1.5), c, &QuadratureSettings::default()).unwrap();
        assert!(((d.energy - q.value) / q.value).abs() < 1e-3);
    }

    #[test]
    fn random_starts_agree() {
        let m = Manifold::hyperbolic(3).unwrap();
        let c = Condenser::new(0.25, 1.0).unwrap();
        for p in [1.5, 7.0] {
            let energies: Vec<f64> = (0..3)
                .map(|s| discrete_condenser_energy_from(&m, p, c, 256, Start::Random(s)).unwrap().energy)
                .collect();
            for e in &energies {
                assert!(((e - energies[0]) / energies[0]).abs() < 1e-10, "{energies:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = Manifold::euclidean(2).unwrap();
        let c = Condenser::new(0.5, 1.0).unwrap();
        assert!(discrete_condenser_energy(&m, 1.0, c, 256).is_err());
        assert!(discrete_condenser_energy(&m, 2.0, c, 10).is_err());
    }
}
