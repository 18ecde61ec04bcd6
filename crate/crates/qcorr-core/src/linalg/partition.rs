//! Resolution of a system into subsystems.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Ordered list of subsystem dimensions fixing the tensor factorization.
///
/// Index convention: the composite index of per-factor indices (i1, ..., in)
/// is ((i1*d2 + i2)*d3 + ...) — the leftmost subsystem varies slowest. This
/// single convention is used everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    dims: Vec<usize>,
}

impl Partition {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidPartition { dim: 0 });
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidPartition { dim: d });
        }
        Ok(Self { dims })
    }

    /// Two-factor convenience.
    pub fn bipartite(left: usize, right: usize) -> Result<Self> {
        Self::new(alloc::vec![left, right])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn factor_dim(&self, index: usize) -> usize {
        self.dims[index]
    }

    /// Total ambient dimension, the product of the factor dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Composite index of a tuple of per-factor indices.
    pub fn ravel(&self, indices: &[usize]) -> usize {
        assert_eq!(indices.len(), self.dims.len(), "index tuple length mismatch");
        let mut composite = 0usize;
        for (&i, &d) in indices.iter().zip(&self.dims) {
            debug_assert!(i < d);
            composite = composite * d + i;
        }
        composite
    }

    /// Per-factor indices of a composite index.
    pub fn unravel(&self, composite: usize) -> Vec<usize> {
        debug_assert!(composite < self.total_dim());
        let mut out = alloc::vec![0usize; self.dims.len()];
        let mut rem = composite;
        for k in (0..self.dims.len()).rev() {
            out[k] = rem % self.dims[k];
            rem /= self.dims[k];
        }
        out
    }
}
