//! Piecewise-exponential densities with exact moment integrals.
//!
//! A leaky ReLU applied to an asymmetric Laplace variable has a density made
//! of at most four pieces of the form `coef * exp(rate * (y - anchor))`,
//! plus (for a plain ReLU) an atom at zero. Every integral the clipping
//! optimizer needs, `∫ f(y) (y - c)^k dy` for `k <= 2` over an interval,
//! has a closed form on such pieces. This module evaluates those closed forms
//! in a way that stays accurate for narrow bins and infinite tails.

use libm::{exp, expm1};

/// `coef * exp(rate * (y - anchor))` on `[lo, hi)`. The anchor is chosen so
/// that the exponent is never positive inside the piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpPiece {
    pub lo: f64,
    pub hi: f64,
    pub coef: f64,
    pub rate: f64,
    pub anchor: f64,
}

impl ExpPiece {
    pub fn density(&self, y: f64) -> f64 {
        if y >= self.lo && y < self.hi {
            self.coef * exp(self.rate * (y - self.anchor))
        } else {
            0.0
        }
    }

    /// `[∫ f, ∫ f (y-c), ∫ f (y-c)^2]` over `[u, v) ∩ [lo, hi)`.
    pub fn moments(&self, u: f64, v: f64, c: f64) -> [f64; 3] {
        let a = u.max(self.lo);
        let b = v.min(self.hi);
        if a.partial_cmp(&b) != Some(core::cmp::Ordering::Less) {
            return [0.0; 3];
        }
        let r = self.rate;
        let width = b - a;
        // Expand around the end where the exponential is largest so the
        // scale factor never overflows and the inner integral is O(width).
        let (base, t) = if r < 0.0 || (r == 0.0 && a.is_finite()) {
            debug_assert!(a.is_finite());
            (a, power_exp_integrals(r, width))
        } else {
            debug_assert!(b.is_finite());
            let k = power_exp_integrals(-r, width);
            (b, [k[0], -k[1], k[2]])
        };
        let scale = self.coef * exp(r * (base - self.anchor));
        let d = base - c;
        [
            scale * t[0],
            scale * (t[1] + d * t[0]),
            scale * (t[2] + 2.0 * d * t[1] + d * d * t[0]),
        ]
    }
}

/// `[∫_0^w s^j e^{q s} ds for j = 0, 1, 2]` with `q <= 0`; `w` may be
/// infinite when `q < 0`.
fn power_exp_integrals(q: f64, w: f64) -> [f64; 3] {
    if w == f64::INFINITY {
        let m = -q;
        return [1.0 / m, 1.0 / (m * m), 2.0 / (m * m * m)];
    }
    let z = q * w;
    if z.abs() < 1.0 {
        // Σ_n q^n w^(n+j+1) / (n! (n+j+1)); the recurrences below cancel
        // badly when |z| is small.
        let mut out = [0.0; 3];
        let mut wp = w;
        for (j, slot) in out.iter_mut().enumerate() {
            let mut term = 1.0; // z^n / n!
            let mut sum = 0.0;
            for n in 0..40 {
                sum += term / (n + j + 1) as f64;
                term *= z / (n + 1) as f64;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            *slot = sum * wp;
            wp *= w;
        }
        return out;
    }
    let ez = exp(z);
    let k0 = expm1(z) / q;
    let k1 = (w * ez - k0) / q;
    let k2 = (w * w * ez - 2.0 * k1) / q;
    [k0, k1, k2]
}

/// Up to four exponential pieces plus an optional atom at `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseDensity {
    pieces: [ExpPiece; 4],
    len: usize,
    zero_mass: f64,
}

impl PiecewiseDensity {
    pub(crate) fn new(pieces: &[ExpPiece], zero_mass: f64) -> Self {
        let empty = ExpPiece {
            lo: 0.0,
            hi: 0.0,
            coef: 0.0,
            rate: 0.0,
            anchor: 0.0,
        };
        let mut arr = [empty; 4];
        let mut len = 0;
        for p in pieces.iter().filter(|p| p.lo < p.hi) {
            arr[len] = *p;
            len += 1;
        }
        Self {
            pieces: arr,
            len,
            zero_mass,
        }
    }

    pub fn pieces(&self) -> &[ExpPiece] {
        &self.pieces[..self.len]
    }

    /// Probability of the atom at zero (plain ReLU only; zero otherwise).
    pub fn zero_mass(&self) -> f64 {
        self.zero_mass
    }

    /// Density of the continuous part.
    pub fn density(&self, y: f64) -> f64 {
        self.pieces().iter().map(|p| p.density(y)).sum()
    }

    /// `[P, ∫ (y-c) dP, ∫ (y-c)^2 dP]` over `[u, v)`, atom included.
    pub fn moments(&self, u: f64, v: f64, c: f64) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for p in self.pieces() {
            let m = p.moments(u, v, c);
            acc[0] += m[0];
            acc[1] += m[1];
            acc[2] += m[2];
        }
        if self.zero_mass > 0.0 && u <= 0.0 && 0.0 < v {
            acc[0] += self.zero_mass;
            acc[1] += self.zero_mass * (-c);
            acc[2] += self.zero_mass * c * c;
        }
        acc
    }

    /// `∫_{[u,v)} (y - c)^2 dP`.
    pub fn second_moment_about(&self, u: f64, v: f64, c: f64) -> f64 {
        self.moments(u, v, c)[2]
    }

    pub fn mass(&self, u: f64, v: f64) -> f64 {
        self.moments(u, v, 0.0)[0]
    }
}
