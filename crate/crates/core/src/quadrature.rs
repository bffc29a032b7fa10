//! Adaptive Gauss-Kronrod (7/15) quadrature with QUADPACK-style error
//! estimation.
//!
//! The driver keeps a max-heap of subintervals keyed by their error estimate
//! and bisects the worst one until the global estimate falls below
//! `max(abs_tol, rel_tol * |I|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kronrod abscissae, descending, last one is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Evaluate power integrands through `exp(e * ln x)` regardless of the
    /// exponent size. Exponents with magnitude above 50 always take this path.
    pub log_domain: bool,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 200,
            log_domain: false,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::Domain("max_subdivisions must be at least 8".into()));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// `x^e` for `x > 0`, honouring the log-domain switch.
    #[inline]
    pub(crate) fn pow(&self, x: f64, e: f64) -> f64 {
        if self.log_domain || e.abs() > 50.0 {
            (e * x.ln()).exp()
        } else {
            x.powf(e)
        }
    }
}

/// Result of a definite integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

impl Integral {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error
        } else {
            self.abs_error / self.value.abs()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]` (finite bounds).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let first = kronrod15(&f, a, b);
    let mut evaluations = 15;
    if !first.value.is_finite() {
        return Err(Error::Accuracy {
            value: first.value,
            estimate: f64::INFINITY,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);
    let mut subdivisions = 1;

    loop {
        let tol = settings.abs_tol.max(settings.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if subdivisions >= settings.max_subdivisions {
            return Err(Error::Accuracy {
                value: total,
                estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Panel is at floating-point resolution; its error cannot shrink.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            total_err -= worst.error;
            continue;
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        if !total.is_finite() {
            return Err(Error::Accuracy {
                value: total,
                estimate: f64::INFINITY,
            });
        }
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // Re-sum to shed accumulated cancellation in the running totals.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let abs_error: f64 = heap.iter().map(|p| p.error).sum();
    Ok(Integral {
        value,
        abs_error,
        evaluations,
    })
}

/// Integrates `f` over `[a, inf)` for `a > 0` via `t = a / s`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    settings: &QuadratureSettings,
) -> Result<Integral> {
    if !(a > 0.0) {
        return Err(Error::Domain("semi-infinite integration needs a > 0".into()));
    }
    integrate(
        |s| {
            if s <= 0.0 {
                0.0
            } else {
                let t = a / s;
                f(t) * a / (s * s)
            }
        },
        0.0,
        1.0,
        settings,
    )
}
