//! Contiguous block partitions of the coordinate space.

use crate::error::{Error, Result};
use crate::vector::Vector;
use std::ops::Range;

/// A decomposition of `{0, .., d-1}` into `N` contiguous blocks.
///
/// Blocks are as equal as possible: the first `d mod N` blocks get
/// `ceil(d/N)` coordinates, the rest `floor(d/N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    offsets: Vec<usize>,
}

impl BlockPartition {
    pub fn new(dim: usize, blocks: usize) -> Result<Self> {
        if blocks == 0 || blocks > dim {
            return Err(Error::InvalidPartition { dim, blocks });
        }
        let base = dim / blocks;
        let extra = dim % blocks;
        let mut offsets = Vec::with_capacity(blocks + 1);
        offsets.push(0);
        for i in 0..blocks {
            let size = base + usize::from(i < extra);
            offsets.push(offsets[i] + size);
        }
        debug_assert_eq!(*offsets.last().unwrap(), dim);
        Ok(Self { offsets })
    }

    /// The trivial one-block partition (full-vector updates).
    pub fn single(dim: usize) -> Self {
        Self { offsets: vec![0, dim] }
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn num_blocks(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn range(&self, block: usize) -> Range<usize> {
        self.offsets[block]..self.offsets[block + 1]
    }

    pub fn block_len(&self, block: usize) -> usize {
        self.offsets[block + 1] - self.offsets[block]
    }

    pub fn max_block_len(&self) -> usize {
        (0..self.num_blocks()).map(|i| self.block_len(i)).max().unwrap_or(0)
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.num_blocks()).map(|i| self.block_len(i)).collect()
    }
}

/// Concatenates per-block vectors back into a full vector, in block order.
pub fn aggregate_blocks(blocks: &[Vec<f64>], partition: &BlockPartition) -> Result<Vector> {
    if blocks.len() != partition.num_blocks() {
        return Err(Error::DimensionMismatch {
            expected: partition.num_blocks(),
            got: blocks.len(),
        });
    }
    let mut out = Vec::with_capacity(partition.dim());
    for (i, block) in blocks.iter().enumerate() {
        if block.len() != partition.block_len(i) {
            return Err(Error::DimensionMismatch {
                expected: partition.block_len(i),
                got: block.len(),
            });
        }
        out.extend_from_slice(block);
    }
    Vector::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_division() {
        let p = BlockPartition::new(6, 3).unwrap();
        assert_eq!(p.sizes(), vec![2, 2, 2]);
    }

    #[test]
    fn remainder_goes_to_leading_blocks() {
        let p = BlockPartition::new(7, 3).unwrap();
        assert_eq!(p.sizes(), vec![3, 2, 2]);
    }

    #[test]
    fn scalar_blocks() {
        let p = BlockPartition::new(5, 5).unwrap();
        assert_eq!(p.sizes(), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(BlockPartition::new(3, 4).is_err());
        assert!(BlockPartition::new(3, 0).is_err());
    }

    #[test]
    fn aggregate_identity() {
        let p = BlockPartition::new(2, 1).unwrap();
        let v = aggregate_blocks(&[vec![1.0, 2.0]], &p).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn aggregate_scalar_blocks() {
        let p = BlockPartition::new(3, 3).unwrap();
        let v = aggregate_blocks(&[vec![1.0], vec![2.0], vec![3.0]], &p).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn aggregate_length_mismatch() {
        let p = BlockPartition::new(3, 3).unwrap();
        assert!(aggregate_blocks(&[vec![1.0, 5.0], vec![2.0], vec![3.0]], &p).is_err());
    }
}
