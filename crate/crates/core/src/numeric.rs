//! Small scalar solvers: Lambert W, bisection and bracketed minimization.

use libm::{exp, log, sqrt};

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Principal real branch `W0(z)` of the Lambert W function, `z >= -1/e`.
///
/// Newton iteration on `w e^w = z` from `ln z - ln ln z` (large `z`) or the
/// branch-point series (small `z`), stopped at 1e-12 relative step.
pub fn lambert_w0(z: f64) -> Result<f64> {
    const BRANCH: f64 = -0.367_879_441_171_442_33; // -1/e
    if z.is_nan() || z < BRANCH {
        return Err(Error::InvalidParameter("Lambert W0 needs z >= -1/e"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let mut w = if z > core::f64::consts::E {
        let l = log(z);
        l - log(l)
    } else if z > 0.0 {
        log(1.0 + z) * 0.8
    } else {
        let p = sqrt(2.0 * (core::f64::consts::E * z + 1.0));
        -1.0 + p - p * p / 3.0
    };
    for _ in 0..100 {
        let ew = exp(w);
        let f = w * ew - z;
        let df = ew * (w + 1.0);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        w -= step;
        if step.abs() <= 1e-12 * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w)
}

/// Root of a continuous `f` on `[lo, hi]` by bisection, or `None` when the
/// endpoints do not bracket a sign change.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || (f_lo > 0.0) == (f_hi > 0.0) {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section search for a minimum of `f` on `[a, b]`. Returns
/// `(x_min, f(x_min))`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Minimizes `f` on `[lo, hi]`: a uniform scan of `steps` intervals picks the
/// best grid point, then golden-section refines within one step of it. The
/// scan protects against flat tails where golden section alone stalls.
pub fn minimize_scan_golden<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    steps: usize,
    tol: f64,
) -> (f64, f64) {
    let steps = steps.max(2);
    let h = (hi - lo) / steps as f64;
    let mut best = (lo, f(lo));
    for k in 1..=steps {
        let x = if k == steps { hi } else { lo + k as f64 * h };
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    let a = (best.0 - h).max(lo);
    let b = (best.0 + h).min(hi);
    let refined = golden_section(&mut f, a, b, tol);
    if refined.1 <= best.1 {
        refined
    } else {
        best
    }
}
