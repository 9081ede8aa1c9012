//! Streaming mean/variance over activation tensors.
//!
//! Each tensor is first reduced with Welford's recurrence and then folded
//! into the accumulator with the pairwise (Chan et al.) combination, so
//! sequential updates, merges of partitions computed on other threads, and
//! windowed sums all use the same numerically stable path.

use alloc::collections::VecDeque;

use crate::error::{Error, Result};
use crate::tensor::FeatureTensor;

/// Count, mean and sum of squared deviations (`m2`) of everything seen so
/// far. The empty state is `count = 0, mean = 0, m2 = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds an accumulator from stored fields.
    pub fn from_parts(count: u64, mean: f64, m2: f64) -> Result<Self> {
        if !mean.is_finite() || !m2.is_finite() || m2 < 0.0 {
            return Err(Error::InvalidParameter("stats mean/m2 must be finite, m2 >= 0"));
        }
        if count == 0 && (mean != 0.0 || m2 != 0.0) {
            return Err(Error::InvalidParameter("empty stats must have zero mean and m2"));
        }
        Ok(Self { count, mean, m2 })
    }

    /// Statistics of a slice. Rejects NaN/Inf.
    pub fn of_values(values: &[f32]) -> Result<Self> {
        let mut s = Self::new();
        for &v in values {
            if !v.is_finite() {
                return Err(Error::NonFiniteInput);
            }
            s.push_unchecked(v as f64);
        }
        Ok(s)
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        self.push_unchecked(x);
        Ok(())
    }

    fn push_unchecked(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Folds every element of `t` into the accumulator. On error the
    /// accumulator is left unchanged.
    pub fn update(&mut self, t: &FeatureTensor) -> Result<()> {
        let part = Self::of_values(t.data())?;
        *self = self.merge(&part);
        Ok(())
    }

    /// Statistics over the union of both streams.
    pub fn merge(&self, other: &Self) -> Self {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        // Weighted mean is symmetric in the operands, which keeps merge
        // commutative to rounding.
        let mean = (na * self.mean + nb * other.mean) / n;
        let m2 = self.m2 + other.m2 + delta * delta * (na * nb / n);
        Self { count, mean, m2 }
    }

    /// Population mean and variance (`m2 / count`).
    pub fn finalize(&self) -> Result<(f64, f64)> {
        if self.count < 2 {
            return Err(Error::InsufficientData {
                count: self.count,
                required: 2,
            });
        }
        Ok((self.mean, self.m2 / self.count as f64))
    }
}

/// Default number of tensors kept by [`WindowedStats`].
pub const DEFAULT_WINDOW: usize = 256;

/// Statistics over the most recent `window` tensors, for adapting the model
/// while streaming video frames.
#[derive(Debug, Clone)]
pub struct WindowedStats {
    window: usize,
    ring: VecDeque<RunningStats>,
}

impl Default for WindowedStats {
    fn default() -> Self {
        Self::new(DEFAULT_WINDOW)
    }
}

impl WindowedStats {
    /// `window` is clamped to at least one tensor.
    pub fn new(window: usize) -> Self {
        let window = window.max(1);
        Self {
            window,
            ring: VecDeque::with_capacity(window),
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn push(&mut self, t: &FeatureTensor) -> Result<()> {
        let part = RunningStats::of_values(t.data())?;
        if self.ring.len() == self.window {
            self.ring.pop_front();
        }
        self.ring.push_back(part);
        Ok(())
    }

    /// Merged statistics of the tensors currently in the window.
    pub fn current(&self) -> RunningStats {
        self.ring
            .iter()
            .fold(RunningStats::new(), |acc, s| acc.merge(s))
    }
}
