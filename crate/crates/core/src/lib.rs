//! Lightweight compression of intermediate feature tensors for split
//! (edge/cloud) neural-network inference.
//!
//! The crate is `no_std` and only needs `alloc`. It contains everything that
//! is pure computation:
//!
//! - [`tensor`] and [`stats`]: the feature-tensor container and streaming
//!   first/second-moment statistics.
//! - [`model`]: an asymmetric Laplace pre-activation passed through a
//!   (leaky) ReLU, fitted to activation statistics by moment matching.
//! - [`clip`]: clipping and quantization error functionals and the optimal
//!   clipping range search, plus the ACIQ baseline.
//! - [`quant`]: the uniform clip-and-quantize map and the entropy-constrained
//!   quantizer design with pinned boundary levels.
//! - [`codec`]: truncated-unary binarization, an adaptive binary range coder
//!   and the container bitstream.
//! - [`pipeline`]: end-to-end encode/decode and rate/distortion metrics.
//!
//! File formats, text parameter files and the command-line tool live in the
//! `lwfc` companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod clip;
pub mod codec;
pub mod density;
pub mod error;
pub mod model;
pub mod numeric;
pub mod pipeline;
pub mod quant;
pub mod stats;
pub mod tensor;

pub use clip::{ClipRange, ErrorBreakdown};
pub use error::{Error, Result};
pub use model::ActivationModel;
pub use pipeline::{CodecConfig, RateReport};
pub use quant::{CodewordLengths, DesignedQuantizer, UniformQuantizer};
pub use stats::RunningStats;
pub use tensor::FeatureTensor;
