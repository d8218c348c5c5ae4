use std::fmt;

use serde::Serialize;

use crate::error::MemError;

pub const ADDRESS_BITS: u32 = 48;
pub const BLOCK_SIZE: u64 = 64;
pub const PAGE_SIZE: u64 = 4096;

/// A byte address in the 48-bit simulated virtual address space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimAddress(u64);

impl SimAddress {
    pub fn new(value: u64) -> Result<Self, MemError> {
        if value >> ADDRESS_BITS != 0 {
            return Err(MemError::OutOfRange(value));
        }
        Ok(SimAddress(value))
    }

    pub const fn get(self) -> u64 {
        self.0
    }

    pub const fn block(self) -> BlockAddr {
        BlockAddr(self.0 & !(BLOCK_SIZE - 1))
    }

    pub const fn page(self) -> u64 {
        self.0 & !(PAGE_SIZE - 1)
    }

    pub const fn is_word_aligned(self) -> bool {
        self.0 % 8 == 0
    }
}

impl fmt::Display for SimAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Address of a 64-byte cache block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockAddr(u64);

impl BlockAddr {
    /// Block containing `addr`. Any address is accepted; the low bits are dropped.
    pub const fn containing(addr: u64) -> Self {
        BlockAddr(addr & !(BLOCK_SIZE - 1))
    }

    pub const fn get(self) -> u64 {
        self.0
    }

    /// Block number (address divided by the block size).
    pub const fn number(self) -> u64 {
        self.0 / BLOCK_SIZE
    }

    pub const fn page(self) -> u64 {
        self.0 & !(PAGE_SIZE - 1)
    }
}

impl fmt::Display for BlockAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}
