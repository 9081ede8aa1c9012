//! Entropy coding of quantizer indices.
//!
//! Indices are binarized with a truncated unary code, each bin is coded with
//! an adaptive binary range coder using one context per bin position, and
//! the payload is wrapped in a small self-describing container.

pub mod binarize;
pub mod bitstream;
pub mod range_coder;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use binarize::{binarize, debinarize};
use range_coder::{BinContext, RangeDecoder, RangeEncoder};

/// Largest level count the container can signal.
pub const MAX_LEVELS: usize = 255;

fn check_levels(n_levels: usize) -> Result<()> {
    if (2..=MAX_LEVELS).contains(&n_levels) {
        Ok(())
    } else {
        Err(Error::BadLevelCount(n_levels))
    }
}

/// Range-codes `indices` with `n_levels - 1` position contexts.
pub fn encode_indices(indices: &[u8], n_levels: usize) -> Result<Vec<u8>> {
    check_levels(n_levels)?;
    let mut contexts = alloc::vec![BinContext::new(); n_levels - 1];
    let mut enc = RangeEncoder::with_capacity(indices.len() / 4 + 16);
    for &index in indices {
        for (position, bit) in binarize(index as usize, n_levels)?.enumerate() {
            enc.encode_bit(&mut contexts[position], bit);
        }
    }
    Ok(enc.finish())
}

/// Decodes exactly `count` indices; the payload must be fully consumed.
pub fn decode_indices(bytes: &[u8], count: usize, n_levels: usize) -> Result<Vec<u8>> {
    check_levels(n_levels)?;
    let mut contexts = alloc::vec![BinContext::new(); n_levels - 1];
    let mut dec = RangeDecoder::new(bytes)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let index = debinarize(n_levels, |position| dec.decode_bit(&mut contexts[position]))?;
        out.push(index as u8);
    }
    match dec.remaining() {
        0 => Ok(out),
        n => Err(Error::TrailingBytes(n)),
    }
}
