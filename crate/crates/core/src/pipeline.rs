//! End-to-end encode/decode and rate/distortion metrics.

use alloc::vec::Vec;

use crate::clip::ClipRange;
use crate::codec::bitstream::{pack_bitstream, parse_bitstream, BitstreamHeader};
use crate::codec::{decode_indices, encode_indices, MAX_LEVELS};
use crate::error::{Error, Result};
use crate::quant::{DesignedQuantizer, UniformQuantizer};
use crate::tensor::FeatureTensor;

#[derive(Debug, Clone, PartialEq)]
enum Mapping {
    Uniform(UniformQuantizer),
    Designed(DesignedQuantizer),
}

/// Quantizer settings of a stream.
///
/// Range and reconstruction levels are rounded to `f32` on construction, so
/// the encoder sees exactly the values the decoder will read from the header.
#[derive(Debug, Clone, PartialEq)]
pub struct CodecConfig {
    mapping: Mapping,
    levels: Vec<f32>,
}

fn f32_range(range: ClipRange) -> Result<ClipRange> {
    ClipRange::new(range.c_min() as f32 as f64, range.c_max() as f32 as f64)
}

fn check_levels(n_levels: usize) -> Result<()> {
    if (2..=MAX_LEVELS).contains(&n_levels) {
        Ok(())
    } else {
        Err(Error::BadLevelCount(n_levels))
    }
}

impl CodecConfig {
    pub fn uniform(range: ClipRange, n_levels: usize) -> Result<Self> {
        check_levels(n_levels)?;
        let q = UniformQuantizer::new(f32_range(range)?, n_levels)?;
        let levels = (0..n_levels)
            .map(|i| q.recon(i).map(|v| v as f32))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mapping: Mapping::Uniform(q),
            levels,
        })
    }

    /// Outer levels must sit on the clipping limits.
    pub fn designed(q: &DesignedQuantizer) -> Result<Self> {
        check_levels(q.n_levels())?;
        if !q.is_pinned() {
            return Err(Error::HeaderInconsistent("designed quantizer must be pinned to its range"));
        }
        let range = f32_range(q.range())?;
        let recon: Vec<f64> = q.recon_levels().iter().map(|&v| v as f32 as f64).collect();
        let q = DesignedQuantizer::new(recon, q.thresholds().to_vec(), range)?;
        let levels = q.recon_levels().iter().map(|&v| v as f32).collect();
        Ok(Self {
            mapping: Mapping::Designed(q),
            levels,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn range(&self) -> ClipRange {
        match &self.mapping {
            Mapping::Uniform(q) => q.range(),
            Mapping::Designed(q) => q.range(),
        }
    }

    pub fn is_designed(&self) -> bool {
        matches!(self.mapping, Mapping::Designed(_))
    }

    /// Reconstruction value of every index.
    pub fn levels(&self) -> &[f32] {
        &self.levels
    }

    /// Index of `x` after clipping.
    pub fn index(&self, x: f32) -> usize {
        let x = self.range().clamp(x as f64);
        match &self.mapping {
            Mapping::Uniform(q) => q.index(x),
            Mapping::Designed(q) => q.index(x),
        }
    }

    fn header(&self, dims: &[u32]) -> Result<BitstreamHeader> {
        let r = self.range();
        let (lo, hi) = (r.c_min() as f32, r.c_max() as f32);
        match self.mapping {
            Mapping::Uniform(_) => BitstreamHeader::uniform(self.levels.len() as u8, dims.to_vec(), lo, hi),
            Mapping::Designed(_) => BitstreamHeader::designed(dims.to_vec(), lo, hi, self.levels.clone()),
        }
    }
}

fn indices(t: &FeatureTensor, cfg: &CodecConfig) -> Result<Vec<u8>> {
    t.data()
        .iter()
        .map(|&x| {
            if x.is_nan() {
                Err(Error::NonFiniteInput)
            } else {
                Ok(cfg.index(x) as u8)
            }
        })
        .collect()
}

/// Clip, quantize (C-order), binarize, range-code and wrap in a header.
pub fn encode_tensor(t: &FeatureTensor, cfg: &CodecConfig) -> Result<Vec<u8>> {
    let header = cfg.header(t.dims())?;
    let idx = indices(t, cfg)?;
    let payload = encode_indices(&idx, cfg.n_levels())?;
    Ok(pack_bitstream(&header, &payload))
}

pub fn decode_tensor(bytes: &[u8]) -> Result<FeatureTensor> {
    let (header, payload) = parse_bitstream(bytes)?;
    let n = header.n_levels();
    let levels: Vec<f32> = match header.recon_table() {
        Some(r) => r.to_vec(),
        None => {
            let range = ClipRange::new(header.c_min() as f64, header.c_max() as f64)?;
            let q = UniformQuantizer::new(range, n)?;
            (0..n)
                .map(|i| q.recon(i).map(|v| v as f32))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let idx = decode_indices(payload, header.element_count(), n)?;
    let data = idx.iter().map(|&i| levels[i as usize]).collect();
    FeatureTensor::new(header.dims().to_vec(), data)
}

/// The lossy part of the pipeline without entropy coding.
pub fn quantize_reconstruct(t: &FeatureTensor, cfg: &CodecConfig) -> Result<FeatureTensor> {
    let data = indices(t, cfg)?
        .iter()
        .map(|&i| cfg.levels[i as usize])
        .collect();
    FeatureTensor::new(t.dims().to_vec(), data)
}

/// Mean squared difference, accumulated in `f64`.
pub fn msre(original: &FeatureTensor, reconstructed: &FeatureTensor) -> Result<f64> {
    if original.dims() != reconstructed.dims() {
        return Err(Error::ShapeMismatch {
            expected: original.len(),
            actual: reconstructed.len(),
        });
    }
    let sum: f64 = original
        .data()
        .iter()
        .zip(reconstructed.data())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    Ok(sum / original.len() as f64)
}

/// Size of a whole stream, header included, per tensor element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub total_bytes: usize,
    pub element_count: usize,
    pub bits_per_element: f64,
}

impl RateReport {
    pub fn new(total_bytes: usize, element_count: usize) -> Self {
        Self {
            total_bytes,
            element_count,
            bits_per_element: total_bytes as f64 * 8.0 / element_count as f64,
        }
    }
}

/// Reads only the header; the payload is not decoded.
pub fn rate_report(bytes: &[u8]) -> Result<RateReport> {
    let (header, _) = parse_bitstream(bytes)?;
    Ok(RateReport::new(bytes.len(), header.element_count()))
}
