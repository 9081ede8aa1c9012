#![allow(dead_code)]

use std::path::PathBuf;

use lwfc_core::ActivationModel;

pub fn resnet() -> ActivationModel {
    ActivationModel::fit(1.1235656, 4.9280124, 0.5, 0.1).unwrap()
}

pub fn yolo() -> ActivationModel {
    ActivationModel::fit(0.4484323, 0.5742644, 0.5, 0.1).unwrap()
}

/// xorshift64*, independent of the crate's sampler.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 >> 12;
        self.0 ^= self.0 << 25;
        self.0 ^= self.0 >> 27;
        self.0.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.unit() * n as f64) as usize
    }
}

pub fn binary_entropy(p: f64) -> f64 {
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Index sequence with a geometric-like distribution: level `k` has weight
/// `r^k`.
pub fn geometric_indices(rng: &mut XorShift, n: usize, n_levels: usize, r: f64) -> Vec<u8> {
    let weights: Vec<f64> = (0..n_levels).map(|k| r.powi(k as i32)).collect();
    let total: f64 = weights.iter().sum();
    (0..n)
        .map(|_| {
            let mut u = rng.unit() * total;
            for (k, w) in weights.iter().enumerate() {
                if u < *w {
                    return k as u8;
                }
                u -= w;
            }
            (n_levels - 1) as u8
        })
        .collect()
}

pub struct GoldenCase {
    pub name: &'static str,
    pub n_levels: usize,
    pub indices: Vec<u8>,
}

/// The frozen index sequences under `tests/golden/`.
pub fn golden_cases() -> Vec<GoldenCase> {
    let mut rng = XorShift(0x9e37_79b9_7f4a_7c15);
    let mut carry = vec![0u8; 4000];
    carry.extend(geometric_indices(&mut rng, 3000, 2, 1.0));
    carry.extend(std::iter::repeat_n(1u8, 4000));
    vec![
        GoldenCase {
            name: "empty_n4",
            n_levels: 4,
            indices: vec![],
        },
        GoldenCase {
            name: "zeros_n2",
            n_levels: 2,
            indices: vec![0; 1000],
        },
        GoldenCase {
            name: "uniform_n8",
            n_levels: 8,
            indices: (0..10_000).map(|_| rng.below(8) as u8).collect(),
        },
        GoldenCase {
            name: "geometric_n16",
            n_levels: 16,
            indices: geometric_indices(&mut rng, 20_000, 16, 0.6),
        },
        GoldenCase {
            name: "uniform_n255",
            n_levels: 255,
            indices: (0..3000).map(|_| rng.below(255) as u8).collect(),
        },
        GoldenCase {
            name: "carry_n2",
            n_levels: 2,
            indices: carry,
        },
    ]
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// `<name>.idx` holds the level count byte followed by the indices,
/// `<name>.bin` the coded payload.
pub fn golden_paths(name: &str) -> (PathBuf, PathBuf) {
    let dir = golden_dir();
    (dir.join(format!("{name}.idx")), dir.join(format!("{name}.bin")))
}
