//! Adaptive binary range coder (LZMA style).
//!
//! The constants are part of the stream format; two implementations must
//! produce identical bytes for identical bins:
//!
//! - 32-bit range starting at `0xFFFF_FFFF`, 64-bit `low`
//! - 11-bit probabilities of a zero bin, starting at 1024, adaptation shift 5
//! - renormalize while `range < 2^24`, one byte at a time, carries resolved
//!   through a cache byte and a count of pending `0xFF` bytes
//! - flush is five byte shifts; the decoder primes its 32-bit code register
//!   with five bytes, the first of which is always `0x00`

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const PROB_BITS: u32 = 11;
pub const PROB_ONE: u16 = 1 << PROB_BITS;
pub const ADAPT_SHIFT: u32 = 5;
pub const TOP: u32 = 1 << 24;

/// Adaptive probability that the next bin is 0, scaled by 2^11.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinContext(u16);

impl Default for BinContext {
    fn default() -> Self {
        Self::new()
    }
}

impl BinContext {
    pub const fn new() -> Self {
        Self(PROB_ONE / 2)
    }

    pub fn prob_zero(&self) -> u16 {
        self.0
    }

    fn bound(&self, range: u32) -> u32 {
        (range >> PROB_BITS) * self.0 as u32
    }

    // stays within [31, 2017]
    fn update(&mut self, bit: bool) {
        if bit {
            self.0 -= self.0 >> ADAPT_SHIFT;
        } else {
            self.0 += (PROB_ONE - self.0) >> ADAPT_SHIFT;
        }
    }
}

#[derive(Debug, Clone)]
pub struct RangeEncoder {
    low: u64,
    range: u32,
    cache: u8,
    cache_size: u64,
    out: Vec<u8>,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        Self::with_capacity(0)
    }

    pub fn with_capacity(bytes: usize) -> Self {
        Self {
            low: 0,
            range: 0xFFFF_FFFF,
            cache: 0,
            cache_size: 1,
            out: Vec::with_capacity(bytes),
        }
    }

    pub fn encode_bit(&mut self, ctx: &mut BinContext, bit: bool) {
        let bound = ctx.bound(self.range);
        if bit {
            self.low += bound as u64;
            self.range -= bound;
        } else {
            self.range = bound;
        }
        ctx.update(bit);
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    fn shift_low(&mut self) {
        if self.low < 0xFF00_0000 || self.low >= 1 << 32 {
            let carry = (self.low >> 32) as u8;
            let mut byte = self.cache;
            loop {
                self.out.push(byte.wrapping_add(carry));
                byte = 0xFF;
                self.cache_size -= 1;
                if self.cache_size == 0 {
                    break;
                }
            }
            self.cache = (self.low >> 24) as u8;
        }
        self.cache_size += 1;
        self.low = (self.low & 0x00FF_FFFF) << 8;
    }

    /// Bytes written so far (excluding bytes still held for carries).
    pub fn bytes_written(&self) -> usize {
        self.out.len()
    }

    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..5 {
            self.shift_low();
        }
        self.out
    }
}

#[derive(Debug, Clone)]
pub struct RangeDecoder<'a> {
    data: &'a [u8],
    pos: usize,
    range: u32,
    code: u32,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(data: &'a [u8]) -> Result<Self> {
        if data.len() < 5 {
            return Err(Error::TruncatedPayload);
        }
        if data[0] != 0 {
            return Err(Error::HeaderInconsistent("range coder stream must start with 0x00"));
        }
        let code = data[1..5]
            .iter()
            .fold(0u32, |acc, &b| (acc << 8) | b as u32);
        Ok(Self {
            data,
            pos: 5,
            range: 0xFFFF_FFFF,
            code,
        })
    }

    pub fn decode_bit(&mut self, ctx: &mut BinContext) -> Result<bool> {
        let bound = ctx.bound(self.range);
        let bit = if self.code < bound {
            self.range = bound;
            false
        } else {
            self.code -= bound;
            self.range -= bound;
            true
        };
        ctx.update(bit);
        while self.range < TOP {
            let byte = *self.data.get(self.pos).ok_or(Error::TruncatedPayload)?;
            self.pos += 1;
            self.range <<= 8;
            self.code = (self.code << 8) | byte as u32;
        }
        Ok(bit)
    }

    /// Bytes not yet consumed.
    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }
}
