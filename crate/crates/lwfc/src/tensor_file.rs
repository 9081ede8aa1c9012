//! LWFT tensor files (little-endian):
//!
//! ```text
//! "LWFT" | version u8 = 1 | ndims u8 | dims: ndims × u32 | data: f32 × product(dims)
//! ```
//!
//! Floats are stored bit for bit, NaN payloads included.

use std::path::Path;

use lwfc_core::tensor::element_count;
use lwfc_core::{Error as CoreError, FeatureTensor};

use crate::error::Error;

pub const MAGIC: [u8; 4] = *b"LWFT";
pub const VERSION: u8 = 1;

pub fn write_tensor(t: &FeatureTensor) -> Vec<u8> {
    let dims = t.dims();
    let mut out = Vec::with_capacity(6 + 4 * dims.len() + 4 * t.len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    // FeatureTensor dims come from u8-sized headers or 1-D vectors
    out.push(dims.len() as u8);
    for d in dims {
        out.extend_from_slice(&d.to_le_bytes());
    }
    for v in t.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses a whole file; bytes past the data are an error.
pub fn read_tensor(bytes: &[u8]) -> Result<FeatureTensor, CoreError> {
    if bytes.len() < 4 || bytes[..4] != MAGIC {
        return Err(CoreError::BadMagic);
    }
    let version = *bytes.get(4).ok_or(CoreError::TruncatedPayload)?;
    if version != VERSION {
        return Err(CoreError::UnsupportedVersion(version));
    }
    let ndims = *bytes.get(5).ok_or(CoreError::TruncatedPayload)? as usize;
    if ndims == 0 {
        return Err(CoreError::ZeroDim);
    }
    let dims_end = 6 + 4 * ndims;
    let dims: Vec<u32> = bytes
        .get(6..dims_end)
        .ok_or(CoreError::TruncatedPayload)?
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let count = element_count(&dims)?;
    let body = &bytes[dims_end..];
    let want = count.checked_mul(4).ok_or(CoreError::TruncatedPayload)?;
    if body.len() < want {
        return Err(CoreError::TruncatedPayload);
    }
    if body.len() > want {
        return Err(CoreError::TrailingBytes(body.len() - want));
    }
    let data = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    FeatureTensor::new(dims, data)
}

pub fn load_tensor(path: &Path) -> Result<FeatureTensor, Error> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    read_tensor(&bytes).map_err(|e| Error::format(path, e))
}

pub fn save_tensor(path: &Path, t: &FeatureTensor) -> Result<(), Error> {
    std::fs::write(path, write_tensor(t)).map_err(|e| Error::io(path, e))
}
