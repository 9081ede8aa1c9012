//! Container layout (little-endian):
//!
//! ```text
//! "LWFC" | version u8 = 1 | flags u8 | n_levels u8 | ndims u8
//! | dims: ndims × u32 | c_min f32 | c_max f32
//! | recon: n_levels × f32   (only when flags bit 0 is set)
//! | payload to end of stream
//! ```

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tensor::element_count;

pub const MAGIC: [u8; 4] = *b"LWFC";
pub const VERSION: u8 = 1;
/// Flags bit 0: the quantizer is a designed one and a recon table follows.
pub const FLAG_DESIGNED: u8 = 0x01;

#[derive(Debug, Clone, PartialEq)]
pub struct BitstreamHeader {
    n_levels: u8,
    dims: Vec<u32>,
    c_min: f32,
    c_max: f32,
    recon: Option<Vec<f32>>,
}

impl BitstreamHeader {
    /// Header for a uniform quantizer.
    pub fn uniform(n_levels: u8, dims: Vec<u32>, c_min: f32, c_max: f32) -> Result<Self> {
        Self::validated(n_levels, dims, c_min, c_max, None)
    }

    /// Header for a designed quantizer with its reconstruction table.
    pub fn designed(dims: Vec<u32>, c_min: f32, c_max: f32, recon: Vec<f32>) -> Result<Self> {
        let n = u8::try_from(recon.len()).map_err(|_| Error::BadLevelCount(recon.len()))?;
        Self::validated(n, dims, c_min, c_max, Some(recon))
    }

    fn validated(n_levels: u8, dims: Vec<u32>, c_min: f32, c_max: f32, recon: Option<Vec<f32>>) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::BadLevelCount(n_levels as usize));
        }
        if dims.len() > u8::MAX as usize {
            return Err(Error::HeaderInconsistent("more than 255 dimensions"));
        }
        element_count(&dims)?;
        if !(c_min.is_finite() && c_max.is_finite() && c_min < c_max) {
            return Err(Error::InvalidRange);
        }
        if let Some(r) = &recon {
            if r.len() != n_levels as usize {
                return Err(Error::HeaderInconsistent("recon table length differs from n_levels"));
            }
            if r[0] != c_min || r[r.len() - 1] != c_max {
                return Err(Error::HeaderInconsistent("recon table must start at c_min and end at c_max"));
            }
            if r.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(core::cmp::Ordering::Less)) {
                return Err(Error::HeaderInconsistent("recon table must be strictly increasing"));
            }
        }
        Ok(Self {
            n_levels,
            dims,
            c_min,
            c_max,
            recon,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels as usize
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn c_min(&self) -> f32 {
        self.c_min
    }

    pub fn c_max(&self) -> f32 {
        self.c_max
    }

    pub fn recon_table(&self) -> Option<&[f32]> {
        self.recon.as_deref()
    }

    pub fn flags(&self) -> u8 {
        if self.recon.is_some() {
            FLAG_DESIGNED
        } else {
            0
        }
    }

    /// Number of symbols in the payload.
    pub fn element_count(&self) -> usize {
        // validated at construction
        element_count(&self.dims).unwrap_or(0)
    }

    /// Serialized header size in bytes.
    pub fn encoded_len(&self) -> usize {
        8 + 4 * self.dims.len() + 8 + self.recon.as_ref().map_or(0, |r| 4 * r.len())
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.flags());
        out.push(self.n_levels);
        out.push(self.dims.len() as u8);
        for d in &self.dims {
            out.extend_from_slice(&d.to_le_bytes());
        }
        out.extend_from_slice(&self.c_min.to_le_bytes());
        out.extend_from_slice(&self.c_max.to_le_bytes());
        if let Some(r) = &self.recon {
            for v in r {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
}

/// Header followed by the payload.
pub fn pack_bitstream(header: &BitstreamHeader, payload: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(header.encoded_len() + payload.len());
    header.write_to(&mut out);
    out.extend_from_slice(payload);
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let end = self.pos.checked_add(N).ok_or(Error::TruncatedPayload)?;
        let chunk = self.bytes.get(self.pos..end).ok_or(Error::TruncatedPayload)?;
        self.pos = end;
        let mut a = [0u8; N];
        a.copy_from_slice(chunk);
        Ok(a)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take()?))
    }
}

/// Splits a stream into its header and payload.
pub fn parse_bitstream(bytes: &[u8]) -> Result<(BitstreamHeader, &[u8])> {
    let mut c = Cursor { bytes, pos: 0 };
    let magic = c.take::<4>().map_err(|_| Error::BadMagic)?;
    if magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = c.u8()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let flags = c.u8()?;
    if flags & !FLAG_DESIGNED != 0 {
        return Err(Error::HeaderInconsistent("unknown flag bits"));
    }
    let n_levels = c.u8()?;
    let ndims = c.u8()?;
    if ndims == 0 {
        return Err(Error::ZeroDim);
    }
    let dims = (0..ndims).map(|_| c.u32()).collect::<Result<Vec<_>>>()?;
    let c_min = c.f32()?;
    let c_max = c.f32()?;
    let recon = if flags & FLAG_DESIGNED != 0 {
        Some((0..n_levels).map(|_| c.f32()).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    let header = BitstreamHeader::validated(n_levels, dims, c_min, c_max, recon)?;
    Ok((header, &bytes[c.pos..]))
}
