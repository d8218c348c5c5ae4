//! Contiguous array sweep, a sanity workload for the striding baseline.

use super::Memory;
use crate::error::MemError;

/// `words` consecutive 8-byte elements starting at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArraySweep {
    pub base: u64,
    pub words: u64,
}

impl ArraySweep {
    /// An array placed well above the node pool.
    pub fn new(words: u64) -> Self {
        ArraySweep {
            base: 0x4000_0000,
            words,
        }
    }

    /// Writes `i + 1` into element `i`.
    pub fn fill<M: Memory>(&self, mem: &mut M) -> Result<(), MemError> {
        for i in 0..self.words {
            mem.store(self.base + 8 * i, i + 1)?;
        }
        Ok(())
    }
}

/// Sums every element in address order.
pub fn array_sweep<M: Memory>(mem: &mut M, array: &ArraySweep) -> Result<u64, MemError> {
    let mut sum = 0u64;
    for i in 0..array.words {
        sum = sum.wrapping_add(mem.load(array.base + 8 * i)?);
    }
    Ok(sum)
}
