//! Clipping and quantization error of an N-level clip-and-quantize map, and
//! the search for the clipping range that minimizes their sum.
//!
//! With `Δ = (c_max - c_min) / (N - 1)`, reconstruction level `i` sits at
//! `c_min + iΔ`. Interior bins are `Δ` wide; the two outermost bins are
//! `Δ/2` wide and reconstruct exactly at `c_min` and `c_max`, so clipped
//! values pick up no further quantization error.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::ActivationModel;
use crate::numeric::{golden_section, lambert_w0, minimize_scan_golden};
use crate::tensor::FeatureTensor;

/// Mass left beyond the search bounds of the optimizers.
pub const SEARCH_TAIL: f64 = 1e-9;
const SCAN_STEPS: usize = 200;
const GOLDEN_TOL: f64 = 1e-8;
const ALTERNATION_TOL: f64 = 1e-4;
const MAX_ALTERNATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipRange {
    c_min: f64,
    c_max: f64,
}

impl ClipRange {
    pub fn new(c_min: f64, c_max: f64) -> Result<Self> {
        if c_min.is_finite() && c_max.is_finite() && c_min < c_max {
            Ok(Self { c_min, c_max })
        } else {
            Err(Error::InvalidRange)
        }
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn width(&self) -> f64 {
        self.c_max - self.c_min
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.c_min, self.c_max)
    }
}

/// Error components; `e_tot` is always `e_quant + e_clip`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBreakdown {
    pub e_quant: f64,
    pub e_clip: f64,
    pub e_tot: f64,
}

impl ErrorBreakdown {
    pub fn new(e_quant: f64, e_clip: f64) -> Self {
        Self {
            e_quant,
            e_clip,
            e_tot: e_quant + e_clip,
        }
    }
}

fn check_levels(n_levels: usize) -> Result<()> {
    if n_levels < 2 {
        Err(Error::BadLevelCount(n_levels))
    } else {
        Ok(())
    }
}

/// `∫_{-∞}^{c_min} f (y - c_min)² + ∫_{c_max}^{∞} f (y - c_max)²`.
pub fn clipping_error(model: &ActivationModel, range: &ClipRange) -> f64 {
    let d = model.density();
    d.second_moment_about(f64::NEG_INFINITY, range.c_min, range.c_min)
        + d.second_moment_about(range.c_max, f64::INFINITY, range.c_max)
}

/// Squared error of values inside the range against their reconstruction
/// levels.
pub fn quantization_error(model: &ActivationModel, range: &ClipRange, n_levels: usize) -> Result<f64> {
    check_levels(n_levels)?;
    let d = model.density();
    let (lo, hi) = (range.c_min, range.c_max);
    let delta = range.width() / (n_levels - 1) as f64;
    let mut err = 0.0;
    for i in 0..n_levels {
        let level = if i == n_levels - 1 {
            hi
        } else {
            lo + i as f64 * delta
        };
        let a = if i == 0 { lo } else { lo + (i as f64 - 0.5) * delta };
        let b = if i == n_levels - 1 {
            hi
        } else {
            lo + (i as f64 + 0.5) * delta
        };
        err += d.second_moment_about(a, b, level);
    }
    Ok(err)
}

pub fn total_error(model: &ActivationModel, range: &ClipRange, n_levels: usize) -> Result<ErrorBreakdown> {
    let e_quant = quantization_error(model, range, n_levels)?;
    Ok(ErrorBreakdown::new(e_quant, clipping_error(model, range)))
}

/// Unchecked `e_tot` for the optimizers; invalid ranges score +∞.
fn e_tot(model: &ActivationModel, c_min: f64, c_max: f64, n_levels: usize) -> f64 {
    match ClipRange::new(c_min, c_max) {
        Ok(r) => {
            clipping_error(model, &r)
                + quantization_error(model, &r, n_levels).unwrap_or(f64::INFINITY)
        }
        Err(_) => f64::INFINITY,
    }
}

/// Best `c_max` for a fixed `c_min`, searched over `(c_min, q]` where `q`
/// leaves [`SEARCH_TAIL`] of the model mass above it.
pub fn optimize_cmax(model: &ActivationModel, n_levels: usize, c_min: f64) -> Result<f64> {
    check_levels(n_levels)?;
    if !c_min.is_finite() {
        return Err(Error::InvalidRange);
    }
    let upper = model.upper_quantile(SEARCH_TAIL);
    if c_min >= upper {
        return Err(Error::InvalidRange);
    }
    Ok(best_cmax(model, n_levels, c_min, upper))
}

fn best_cmax(model: &ActivationModel, n_levels: usize, c_min: f64, upper: f64) -> f64 {
    let span = upper - c_min;
    let lo = c_min + span * 1e-6;
    minimize_scan_golden(|c| e_tot(model, c_min, c, n_levels), lo, upper, SCAN_STEPS, GOLDEN_TOL).0
}

fn best_cmin(model: &ActivationModel, n_levels: usize, c_max: f64, lower: f64) -> f64 {
    let span = c_max - lower;
    let hi = c_max - span * 1e-6;
    minimize_scan_golden(|c| e_tot(model, c, c_max, n_levels), lower, hi, SCAN_STEPS, GOLDEN_TOL).0
}

/// Joint minimizer of `e_tot` over `(c_min, c_max)`, by alternating 1-D
/// searches seeded from the `c_min = 0` solution.
pub fn optimize_range(model: &ActivationModel, n_levels: usize) -> Result<ClipRange> {
    check_levels(n_levels)?;
    let upper = model.upper_quantile(SEARCH_TAIL);
    let lower = model.lower_quantile(SEARCH_TAIL);
    let mut c_min = 0.0f64.clamp(lower, upper);
    let mut c_max = best_cmax(model, n_levels, c_min, upper);
    for _ in 0..MAX_ALTERNATIONS {
        let next_min = best_cmin(model, n_levels, c_max, lower);
        let next_max = best_cmax(model, n_levels, next_min, upper);
        let change = (next_min - c_min).abs().max((next_max - c_max).abs());
        c_min = next_min;
        c_max = next_max;
        if change < ALTERNATION_TOL {
            break;
        }
    }
    // final polish along the width with the lower end fixed
    let (c_max, _) = golden_section(
        |c| e_tot(model, c_min, c, n_levels),
        c_max - ALTERNATION_TOL,
        c_max + ALTERNATION_TOL,
        GOLDEN_TOL,
    );
    ClipRange::new(c_min, c_max)
}

/// ACIQ clipping value `b · W(12 · N²)` for a Laplace scale `b` (the
/// `2^{2M}` term with `M = log2 N` bits is `N²`).
pub fn aciq_cmax(b: f64, n_levels: usize) -> Result<f64> {
    check_levels(n_levels)?;
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidParameter("Laplace scale b must be finite and > 0"));
    }
    let n = n_levels as f64;
    Ok(b * lambert_w0(12.0 * n * n)?)
}

/// Maximum-likelihood Laplace scale: mean absolute deviation about the
/// sample median.
pub fn estimate_laplace_b(t: &FeatureTensor) -> Result<f64> {
    if t.is_empty() {
        return Err(Error::EmptyTensor);
    }
    if t.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let mut v: Vec<f64> = t.data().iter().map(|&x| x as f64).collect();
    let n = v.len();
    let mid = n / 2;
    let (_, &mut upper_mid, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let median = if n % 2 == 1 {
        upper_mid
    } else {
        let lower_mid = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower_mid + upper_mid)
    };
    let b = v.iter().map(|x| (x - median).abs()).sum::<f64>() / n as f64;
    if b > 0.0 {
        Ok(b)
    } else {
        Err(Error::DegenerateData)
    }
}

/// `ErrorBreakdown` at each `c_max` in a strictly increasing grid.
pub fn error_curve(
    model: &ActivationModel,
    n_levels: usize,
    c_min: f64,
    c_max_grid: &[f64],
) -> Result<Vec<(f64, ErrorBreakdown)>> {
    check_levels(n_levels)?;
    if c_max_grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(core::cmp::Ordering::Less)) {
        return Err(Error::InvalidRange);
    }
    c_max_grid
        .iter()
        .map(|&c| {
            let r = ClipRange::new(c_min, c)?;
            Ok((c, total_error(model, &r, n_levels)?))
        })
        .collect()
}
