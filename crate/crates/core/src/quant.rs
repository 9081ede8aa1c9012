//! Scalar quantizers for clipped activations.
//!
//! [`UniformQuantizer`] is the plain clip-and-round map. [`design_ecq`]
//! trains an entropy-constrained quantizer whose rate term is the known
//! truncated-unary codeword length, with the two outermost reconstruction
//! levels pinned to the clipping limits so decoded activations span the
//! whole clipping range. [`design_ecq_conventional`] is the same iteration
//! without pinning.

use alloc::vec::Vec;

use libm::floor;

use crate::clip::ClipRange;
use crate::error::{Error, Result};

/// `N` uniformly spaced levels from `c_min` to `c_max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformQuantizer {
    range: ClipRange,
    n_levels: usize,
}

impl UniformQuantizer {
    pub fn new(range: ClipRange, n_levels: usize) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::BadLevelCount(n_levels));
        }
        Ok(Self { range, n_levels })
    }

    pub fn range(&self) -> ClipRange {
        self.range
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    /// Interior bin width.
    pub fn step(&self) -> f64 {
        self.range.width() / (self.n_levels - 1) as f64
    }

    /// `round((clip(x) - c_min) / (c_max - c_min) · (N - 1))`, halves rounded
    /// up. NaN maps to 0.
    pub fn index(&self, x: f64) -> usize {
        let clipped = self.range.clamp(x);
        let scaled = (clipped - self.range.c_min()) / self.range.width() * (self.n_levels - 1) as f64;
        let i = floor(scaled + 0.5);
        if i >= 0.0 {
            (i as usize).min(self.n_levels - 1)
        } else {
            0
        }
    }

    /// `c_min + index·Δ`; the last level is exactly `c_max`.
    pub fn recon(&self, index: usize) -> Result<f64> {
        if index >= self.n_levels {
            return Err(Error::IndexOutOfRange {
                index,
                n_levels: self.n_levels,
            });
        }
        Ok(if index == self.n_levels - 1 {
            self.range.c_max()
        } else {
            self.range.c_min() + index as f64 * self.step()
        })
    }
}

/// Codeword length per quantizer index, used as the rate term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordLengths(Vec<u32>);

impl CodewordLengths {
    /// Truncated-unary lengths: `n + 1` for `n < N - 1`, and `N - 1` for the
    /// last index.
    pub fn truncated_unary(n_levels: usize) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::BadLevelCount(n_levels));
        }
        Ok(Self(
            (0..n_levels)
                .map(|n| (n + 1).min(n_levels - 1) as u32)
                .collect(),
        ))
    }

    pub fn from_lengths(lengths: Vec<u32>) -> Result<Self> {
        if lengths.len() < 2 {
            return Err(Error::BadLevelCount(lengths.len()));
        }
        Ok(Self(lengths))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Quantizer with explicit reconstruction levels and decision thresholds.
/// `thresholds[k]` separates index `k` from `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignedQuantizer {
    recon: Vec<f64>,
    thresholds: Vec<f64>,
    range: ClipRange,
}

impl DesignedQuantizer {
    /// Checks that levels and thresholds strictly increase and interleave.
    pub fn new(recon: Vec<f64>, thresholds: Vec<f64>, range: ClipRange) -> Result<Self> {
        let n = recon.len();
        if n < 2 {
            return Err(Error::BadLevelCount(n));
        }
        if thresholds.len() != n - 1 {
            return Err(Error::InvalidParameter("need exactly N - 1 thresholds"));
        }
        if recon.iter().chain(&thresholds).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        let interleaved = thresholds
            .iter()
            .enumerate()
            .all(|(k, &t)| recon[k] < t && t < recon[k + 1]);
        if !interleaved {
            return Err(Error::NonMonotoneResult);
        }
        Ok(Self {
            recon,
            thresholds,
            range,
        })
    }

    /// Nearest-level quantizer over given levels (midpoint thresholds), for
    /// when only the reconstruction table is known.
    pub fn from_levels(recon: Vec<f64>, range: ClipRange) -> Result<Self> {
        let thresholds = recon.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        Self::new(recon, thresholds, range)
    }

    pub fn n_levels(&self) -> usize {
        self.recon.len()
    }

    pub fn recon_levels(&self) -> &[f64] {
        &self.recon
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn range(&self) -> ClipRange {
        self.range
    }

    /// Whether the outer levels sit exactly on the clipping limits.
    pub fn is_pinned(&self) -> bool {
        self.recon[0] == self.range.c_min() && self.recon[self.recon.len() - 1] == self.range.c_max()
    }

    /// Number of thresholds `<= x`: a value exactly on a threshold goes to
    /// the upper bin.
    pub fn index(&self, x: f64) -> usize {
        self.thresholds.partition_point(|&t| t <= x)
    }

    pub fn recon(&self, index: usize) -> Result<f64> {
        self.recon
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                n_levels: self.recon.len(),
            })
    }
}

/// Iteration controls for the quantizer design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOptions {
    pub max_iters: usize,
    /// Stop when the assignment cost drops by less than this. `None` means
    /// `1e-6 ×` the first iteration's cost.
    pub cost_epsilon: Option<f64>,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self {
            max_iters: 100,
            cost_epsilon: None,
        }
    }
}

/// State after one assignment + update round.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignIteration {
    /// Lagrangian cost `Σ (x - x̂)² + λ·b` right after assignment.
    pub assignment_cost: f64,
    /// Levels after the update step.
    pub recon: Vec<f64>,
    pub occupancy: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignOutcome {
    pub quantizer: DesignedQuantizer,
    pub history: Vec<DesignIteration>,
}

/// Which levels the update step may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pinning {
    /// Outer levels stay on `c_min` / `c_max`.
    Pinned,
    /// Every level moves to its bin centroid.
    Conventional,
}

/// Entropy-constrained design with pinned outer levels.
pub fn design_ecq(
    samples: &[f32],
    n_levels: usize,
    lengths: &CodewordLengths,
    rate_lambda: f64,
    range: ClipRange,
    options: DesignOptions,
) -> Result<DesignedQuantizer> {
    design(samples, n_levels, lengths, rate_lambda, range, options, Pinning::Pinned).map(|o| o.quantizer)
}

/// Entropy-constrained design where the outer levels are free centroids.
pub fn design_ecq_conventional(
    samples: &[f32],
    n_levels: usize,
    lengths: &CodewordLengths,
    rate_lambda: f64,
    range: ClipRange,
    options: DesignOptions,
) -> Result<DesignedQuantizer> {
    design(samples, n_levels, lengths, rate_lambda, range, options, Pinning::Conventional).map(|o| o.quantizer)
}

/// Full design run, keeping the per-iteration history.
///
/// 1. clip samples to the range;
/// 2. start from uniform levels over the range;
/// 3. assign each sample to `argmin_n (x - x̂_n)² + λ·b_n`;
/// 4. move levels to their bin centroids (outer levels stay pinned unless
///    `Conventional`); an empty bin keeps its level;
/// 5. repeat steps 3 and 4 until the assignment cost drops by less than epsilon;
/// 6. thresholds `t_n = (x̂_n + x̂_{n-1})/2 + λ (b_n - b_{n-1}) / (2 (x̂_n - x̂_{n-1}))`.
pub fn design(
    samples: &[f32],
    n_levels: usize,
    lengths: &CodewordLengths,
    rate_lambda: f64,
    range: ClipRange,
    options: DesignOptions,
    pinning: Pinning,
) -> Result<DesignOutcome> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if n_levels < 2 {
        return Err(Error::BadLevelCount(n_levels));
    }
    if lengths.len() != n_levels {
        return Err(Error::InvalidParameter("codeword lengths must have N entries"));
    }
    if !(rate_lambda.is_finite() && rate_lambda >= 0.0) {
        return Err(Error::InvalidParameter("rate_lambda must be finite and >= 0"));
    }
    if samples.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFiniteInput);
    }
    let xs: Vec<f64> = samples.iter().map(|&v| range.clamp(v as f64)).collect();
    let (lo, hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if lo == hi {
        return Err(Error::DegenerateData);
    }

    let rates: Vec<f64> = lengths.as_slice().iter().map(|&b| rate_lambda * b as f64).collect();
    let uniform = UniformQuantizer::new(range, n_levels)?;
    let mut recon: Vec<f64> = (0..n_levels).map(|i| uniform.recon(i)).collect::<Result<_>>()?;
    let mut sums = alloc::vec![0.0f64; n_levels];
    let mut counts = alloc::vec![0usize; n_levels];
    let mut history = Vec::new();
    let mut previous_cost = f64::INFINITY;
    let mut epsilon = options.cost_epsilon;

    for _ in 0..options.max_iters.max(1) {
        sums.iter_mut().for_each(|s| *s = 0.0);
        counts.iter_mut().for_each(|c| *c = 0);
        let mut cost = 0.0;
        for &x in &xs {
            let (best, best_cost) = assign(x, &recon, &rates);
            sums[best] += x;
            counts[best] += 1;
            cost += best_cost;
        }

        let movable = match pinning {
            Pinning::Pinned => 1..n_levels - 1,
            Pinning::Conventional => 0..n_levels,
        };
        for n in movable {
            if counts[n] > 0 {
                recon[n] = sums[n] / counts[n] as f64;
            }
        }
        if pinning == Pinning::Pinned {
            recon[0] = range.c_min();
            recon[n_levels - 1] = range.c_max();
        }
        history.push(DesignIteration {
            assignment_cost: cost,
            recon: recon.clone(),
            occupancy: counts.clone(),
        });

        let eps = *epsilon.get_or_insert(1e-6 * cost);
        let improvement = previous_cost - cost;
        previous_cost = cost;
        if improvement < eps || cost == 0.0 {
            break;
        }
    }

    // Interior bins still empty at convergence sit halfway between their
    // neighbours.
    for n in 1..n_levels - 1 {
        if counts[n] == 0 {
            recon[n] = 0.5 * (recon[n - 1] + recon[n + 1]);
        }
    }
    if recon.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(core::cmp::Ordering::Less)) {
        return Err(Error::NonMonotoneResult);
    }

    let b = lengths.as_slice();
    let thresholds = (1..n_levels)
        .map(|n| {
            let (prev, next) = (recon[n - 1], recon[n]);
            let gap = next - prev;
            let t = 0.5 * (prev + next) + rate_lambda * (b[n] as f64 - b[n - 1] as f64) / (2.0 * gap);
            // a large rate term can push t outside its cell; pull it back
            // just inside
            let inset = 1e-9 * gap;
            t.clamp(prev + inset, next - inset)
        })
        .collect::<Vec<f64>>();
    if thresholds.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(core::cmp::Ordering::Less)) {
        return Err(Error::NonMonotoneResult);
    }
    let quantizer = DesignedQuantizer::new(recon, thresholds, range)?;
    Ok(DesignOutcome { quantizer, history })
}

/// Lowest Lagrangian cost level; ties go to the higher index.
fn assign(x: f64, recon: &[f64], rates: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut best_cost = f64::INFINITY;
    for (n, (&r, &rate)) in recon.iter().zip(rates).enumerate() {
        let c = (x - r) * (x - r) + rate;
        if c <= best_cost {
            best = n;
            best_cost = c;
        }
    }
    (best, best_cost)
}
