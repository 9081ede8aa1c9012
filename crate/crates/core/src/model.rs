//! Analytic model of layer activations.
//!
//! Pre-activations follow an asymmetric Laplace distribution
//!
//! ```text
//! f(x) = λ / (κ + 1/κ) · exp( λ (x - μ) / κ)   for x < μ
//!        λ / (κ + 1/κ) · exp(-λ κ (x - μ))     for x >= μ
//! ```
//!
//! and the layer output is `y = leaky_relu(x)` with negative slope `leak`.
//! The output density is piecewise exponential (see [`crate::density`]); for
//! `leak = 0` it also has an atom at zero.

use libm::{exp, log, sqrt};
use rand_chacha::ChaCha8Rng;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};

use crate::density::{ExpPiece, PiecewiseDensity};
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::tensor::FeatureTensor;

pub const DEFAULT_KAPPA: f64 = 0.5;
pub const DEFAULT_LEAK: f64 = 0.1;

/// Leaky ReLU with slope `leak` for negative inputs; `leak = 0` is a ReLU.
pub fn leaky_relu(x: f64, leak: f64) -> f64 {
    if x < 0.0 {
        leak * x
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationModel {
    lambda: f64,
    mu: f64,
    kappa: f64,
    leak: f64,
}

impl ActivationModel {
    pub fn new(lambda: f64, mu: f64, kappa: f64, leak: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter("lambda must be finite and > 0"));
        }
        if !mu.is_finite() {
            return Err(Error::InvalidParameter("mu must be finite"));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter("kappa must be finite and > 0"));
        }
        if !(0.0..1.0).contains(&leak) {
            return Err(Error::InvalidParameter("leak must lie in [0, 1)"));
        }
        Ok(Self {
            lambda,
            mu,
            kappa,
            leak,
        })
    }

    /// κ = 0.5 and leak = 0.1.
    pub fn with_defaults(lambda: f64, mu: f64) -> Result<Self> {
        Self::new(lambda, mu, DEFAULT_KAPPA, DEFAULT_LEAK)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn leak(&self) -> f64 {
        self.leak
    }

    /// Normalizing constant of the asymmetric Laplace density.
    fn peak_density(&self) -> f64 {
        self.lambda / (self.kappa + 1.0 / self.kappa)
    }

    /// Probability that the pre-activation lies below `μ`.
    fn left_mass(&self) -> f64 {
        let k2 = self.kappa * self.kappa;
        k2 / (1.0 + k2)
    }

    /// `P(X < 0)` for the pre-activation.
    pub fn negative_input_mass(&self) -> f64 {
        let (l, m, k) = (self.lambda, self.mu, self.kappa);
        if m < 0.0 {
            self.left_mass() + (1.0 - self.left_mass()) * (1.0 - exp(l * k * m))
        } else {
            self.left_mass() * exp(-l * m / k)
        }
    }

    /// Piecewise-exponential form of the output distribution.
    pub fn density(&self) -> PiecewiseDensity {
        let (l, m, k, a) = (self.lambda, self.mu, self.kappa, self.leak);
        let c = self.peak_density();
        let inf = f64::INFINITY;
        let mut pieces = [ExpPiece {
            lo: 0.0,
            hi: 0.0,
            coef: 0.0,
            rate: 0.0,
            anchor: 0.0,
        }; 4];
        if m < 0.0 {
            if a > 0.0 {
                let am = a * m;
                pieces[0] = ExpPiece {
                    lo: -inf,
                    hi: am,
                    coef: c / a,
                    rate: l / (k * a),
                    anchor: am,
                };
                pieces[1] = ExpPiece {
                    lo: am,
                    hi: 0.0,
                    coef: c / a,
                    rate: -l * k / a,
                    anchor: am,
                };
            }
            pieces[2] = ExpPiece {
                lo: 0.0,
                hi: inf,
                coef: c * exp(l * k * m),
                rate: -l * k,
                anchor: 0.0,
            };
        } else {
            if a > 0.0 {
                pieces[0] = ExpPiece {
                    lo: -inf,
                    hi: 0.0,
                    coef: c / a * exp(-l * m / k),
                    rate: l / (k * a),
                    anchor: 0.0,
                };
            }
            pieces[1] = ExpPiece {
                lo: 0.0,
                hi: m,
                coef: c,
                rate: l / k,
                anchor: m,
            };
            pieces[2] = ExpPiece {
                lo: m,
                hi: inf,
                coef: c,
                rate: -l * k,
                anchor: m,
            };
        }
        let atom = if a == 0.0 {
            self.negative_input_mass()
        } else {
            0.0
        };
        PiecewiseDensity::new(&pieces, atom)
    }

    /// Output density at `y`. For a plain ReLU this is the continuous part
    /// only (zero for `y < 0`); the atom is reported by [`Self::pdf_relu`].
    pub fn pdf(&self, y: f64) -> f64 {
        self.density().density(y)
    }

    /// `(density(y), P(Y = 0))` for a plain ReLU model.
    pub fn pdf_relu(&self, y: f64) -> Result<(f64, f64)> {
        if self.leak != 0.0 {
            return Err(Error::LeakNotZero);
        }
        let d = self.density();
        Ok((d.density(y), d.zero_mass()))
    }

    /// Whether the closed-form moments apply (κ = 0.5, leak = 0.1, μ < 0).
    pub fn has_closed_form(&self) -> bool {
        self.kappa == DEFAULT_KAPPA && self.leak == DEFAULT_LEAK && self.mu < 0.0
    }

    /// `E[Y] = 0.1 μ + (0.15 + 1.44 e^{λμ/2}) / λ` when applicable.
    pub fn closed_form_mean(&self) -> Option<f64> {
        self.has_closed_form().then(|| {
            let (l, m) = (self.lambda, self.mu);
            0.1 * m + (0.15 + 1.44 * exp(0.5 * l * m)) / l
        })
    }

    /// `Var[Y] = ((5.904 - 0.288 λμ) e^{λμ/2} - 2.0736 e^{λμ} + 0.0425) / λ²`
    /// when applicable.
    pub fn closed_form_variance(&self) -> Option<f64> {
        self.has_closed_form().then(|| {
            let t = self.lambda * self.mu;
            ((5.904 - 0.288 * t) * exp(0.5 * t) - 2.0736 * exp(t) + 0.0425)
                / (self.lambda * self.lambda)
        })
    }

    /// Mean by exact integration of the piecewise density.
    pub fn piecewise_mean(&self) -> f64 {
        self.density()
            .moments(f64::NEG_INFINITY, f64::INFINITY, 0.0)[1]
    }

    /// Variance by exact integration of the piecewise density.
    pub fn piecewise_variance(&self) -> f64 {
        let mean = self.piecewise_mean();
        let m = self
            .density()
            .moments(f64::NEG_INFINITY, f64::INFINITY, mean);
        // m[1] is the residual first moment about the mean, ~0
        (m[2] - m[1] * m[1]).max(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.closed_form_mean()
            .unwrap_or_else(|| self.piecewise_mean())
    }

    pub fn variance(&self) -> f64 {
        self.closed_form_variance()
            .unwrap_or_else(|| self.piecewise_variance())
    }

    /// `E[Y²]`.
    pub fn second_moment(&self) -> f64 {
        let m = self.mean();
        self.variance() + m * m
    }

    /// `y` such that `P(Y > y) = tail`.
    pub fn upper_quantile(&self, tail: f64) -> f64 {
        let d = self.density();
        let survival = |y: f64| d.mass(y, f64::INFINITY) - tail;
        let (lo, hi) = self.search_bracket();
        bisect(survival, lo, hi, 1e-12).unwrap_or(hi)
    }

    /// `y` such that `P(Y < y) = tail`.
    pub fn lower_quantile(&self, tail: f64) -> f64 {
        let d = self.density();
        let cdf = |y: f64| d.mass(f64::NEG_INFINITY, y) - tail;
        let (lo, hi) = self.search_bracket();
        bisect(cdf, lo, hi, 1e-12).unwrap_or(lo)
    }

    /// Interval containing all but ~e^-60 of the mass on either side.
    fn search_bracket(&self) -> (f64, f64) {
        let (l, k, m) = (self.lambda, self.kappa, self.mu);
        let lo = leaky_relu(m - 60.0 * k / l, self.leak) - 1.0;
        let hi = m.max(0.0) + 60.0 / (l * k) + 1.0;
        (lo, hi)
    }

    /// Pre-activation quantile (inverse CDF of the asymmetric Laplace).
    fn input_quantile(&self, u: f64) -> f64 {
        let (l, m, k) = (self.lambda, self.mu, self.kappa);
        let p0 = self.left_mass();
        if u < p0 {
            m + (k / l) * log(u / p0)
        } else {
            m - log((1.0 - u) / (1.0 - p0)) / (l * k)
        }
    }

    /// `n` i.i.d. activations: inverse-CDF draws of the pre-activation passed
    /// through the leaky ReLU. Deterministic in `seed` (ChaCha8).
    pub fn sample(&self, n: usize, seed: u64) -> Result<FeatureTensor> {
        if n == 0 {
            return Err(Error::EmptyTensor);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..n)
            .map(|_| {
                // uniform on the open interval (0, 1)
                let u = ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
                leaky_relu(self.input_quantile(u), self.leak) as f32
            })
            .collect();
        FeatureTensor::from_vec(data)
    }

    /// Like [`sample`](Self::sample) but stratified: draw `i` takes its
    /// uniform from `[i/n, (i+1)/n)`, then the draws are shuffled. Every
    /// element still has the model distribution, and Monte-Carlo averages
    /// over the tensor have far lower variance than with i.i.d. draws.
    pub fn sample_stratified(&self, n: usize, seed: u64) -> Result<FeatureTensor> {
        if n == 0 {
            return Err(Error::EmptyTensor);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data: alloc::vec::Vec<f32> = (0..n)
            .map(|i| {
                let v = ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
                // rounding can reach 1.0 in the last stratum
                let u = ((i as f64 + v) / n as f64).min(1.0 - f64::EPSILON / 2.0);
                leaky_relu(self.input_quantile(u), self.leak) as f32
            })
            .collect();
        data.shuffle(&mut rng);
        FeatureTensor::from_vec(data)
    }

    /// Moment-matched model: finds `(λ, μ)` with `μ < 0` whose output mean
    /// and variance equal the given values.
    ///
    /// `(λ, μ) → (λ/s, sμ)` scales the output by `s`, so the scale-free
    /// ratio `mean / sqrt(variance)` depends only on `t = λμ`. That ratio is
    /// root-found by bisection over `t ∈ [-50, -1e-6]`, then `λ` follows from
    /// the variance.
    pub fn fit(sample_mean: f64, sample_variance: f64, kappa: f64, leak: f64) -> Result<Self> {
        if !sample_mean.is_finite() || !sample_variance.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        if sample_variance <= 0.0 {
            return Err(Error::InvalidMoments);
        }
        Self::new(1.0, -1.0, kappa, leak)?;
        let unit = |t: f64| Self {
            lambda: 1.0,
            mu: t,
            kappa,
            leak,
        };
        let target = sample_mean / sqrt(sample_variance);
        let ratio = |t: f64| {
            let m = unit(t);
            m.mean() / sqrt(m.variance()) - target
        };
        let t = bisect(ratio, -50.0, -1e-6, 1e-13).ok_or(Error::NoSolution)?;
        let lambda = sqrt(unit(t).variance() / sample_variance);
        Self::new(lambda, t / lambda, kappa, leak)
    }
}
