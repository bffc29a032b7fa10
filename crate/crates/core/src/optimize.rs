//! One-dimensional minimisation: bracketing scan followed by golden-section
//! refinement, plus a tridiagonal solver shared by the discrete oracles.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Outcome of [`scan_then_golden`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanMinimum {
    pub x: f64,
    pub value: f64,
    /// Best scan point was the first grid point.
    pub at_lower: bool,
    /// Best scan point was the last grid point.
    pub at_upper: bool,
    /// Spread of the scanned values was below `flat_tol`.
    pub flat: bool,
}

/// Minimises `f` on `[lo, hi]`: evaluates an equispaced grid of `points`
/// values, then refines between the neighbours of the best one.
///
/// Boundary minima are reported (not refined) so callers can decide whether
/// the infimum is attained.
pub fn scan_then_golden<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    points: usize,
    x_tol: f64,
    flat_tol: f64,
) -> Result<ScanMinimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let mut values = Vec::with_capacity(points);
    for i in 0..points {
        let x = if i == points - 1 { hi } else { lo + step * i as f64 };
        values.push((x, f(x)?));
    }
    let (best, &(bx, bv)) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("grid is nonempty");
    let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    let flat = (max - bv).abs() <= flat_tol * bv.abs().max(1.0);
    if best == 0 || best == points - 1 {
        return Ok(ScanMinimum {
            x: bx,
            value: bv,
            at_lower: best == 0,
            at_upper: best == points - 1,
            flat,
        });
    }
    let (x, value) = golden_section(&mut f, values[best - 1].0, values[best + 1].0, x_tol)?;
    let (x, value) = if value <= bv { (x, value) } else { (bx, bv) };
    Ok(ScanMinimum {
        x,
        value,
        at_lower: false,
        at_upper: false,
        flat,
    })
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
pub fn golden_section<F>(f: &mut F, mut a: f64, mut b: f64, x_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Solves a tridiagonal system in place (Thomas algorithm).
///
/// `lower[i]` couples row `i + 1` to column `i`, `upper[i]` row `i` to
/// column `i + 1`. Returns `None` on a zero pivot.
pub(crate) fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Option<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return None;
    }
    c[0] = if n > 1 { upper[0] / pivot } else { 0.0 };
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Some(d)
}
