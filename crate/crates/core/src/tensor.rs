//! The feature-tensor container.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Activations of one layer output: a C-order (last axis fastest) array of
/// `f32` values.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    dims: Vec<u32>,
    data: Vec<f32>,
}

/// Most axes a tensor may have; file headers store the count in one byte.
pub const MAX_DIMS: usize = 255;

/// Number of elements for a shape, or `ZeroDim` if the shape is empty or has
/// a zero axis.
pub fn element_count(dims: &[u32]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::ZeroDim);
    }
    if dims.len() > MAX_DIMS {
        return Err(Error::InvalidParameter("more than 255 axes"));
    }
    dims.iter().try_fold(1usize, |acc, &d| {
        acc.checked_mul(d as usize)
            .ok_or(Error::InvalidParameter("tensor element count overflows usize"))
    })
}

impl FeatureTensor {
    pub fn new(dims: Vec<u32>, data: Vec<f32>) -> Result<Self> {
        let expected = element_count(&dims)?;
        if data.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    /// One-dimensional tensor over `data`.
    pub fn from_vec(data: Vec<f32>) -> Result<Self> {
        let len = u32::try_from(data.len())
            .map_err(|_| Error::InvalidParameter("1-D tensor longer than u32::MAX"))?;
        Self::new(alloc::vec![len], data)
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Always at least one: zero-sized tensors cannot be constructed.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn into_parts(self) -> (Vec<u32>, Vec<f32>) {
        (self.dims, self.data)
    }
}
