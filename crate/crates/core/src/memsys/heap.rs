use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::addr::SimAddress;
use crate::error::MemError;

/// First byte of the node pool. Page aligned and far from address zero so that
/// NULL never aliases a node.
pub const POOL_BASE: u64 = 0x1000_0000;

/// Byte-addressable simulated memory holding 64-bit words, plus a node pool
/// whose slots are handed out in a seeded shuffled order.
///
/// Words that were never written read as zero.
#[derive(Debug, Clone, Default)]
pub struct SimHeap {
    words: HashMap<u64, u64>,
    // Remaining slots, popped from the back.
    pool: Vec<u64>,
    slot_size: u32,
    pool_seed: u64,
    allocated: usize,
}

impl SimHeap {
    /// An empty heap without a node pool.
    pub fn new() -> Self {
        Self::default()
    }

    /// A heap whose pool holds `slots` contiguous slots of `slot_size` bytes
    /// (rounded up to 8) starting at [`POOL_BASE`], allocated in an order
    /// shuffled by `seed`.
    pub fn with_pool(seed: u64, slots: usize, slot_size: u32) -> Self {
        let slot_size = slot_size.max(8).next_multiple_of(8);
        let mut pool: Vec<u64> = (0..slots as u64)
            .map(|i| POOL_BASE + i * u64::from(slot_size))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pool.shuffle(&mut rng);
        pool.reverse();
        SimHeap {
            words: HashMap::new(),
            pool,
            slot_size,
            pool_seed: seed,
            allocated: 0,
        }
    }

    pub fn slot_size(&self) -> u32 {
        self.slot_size
    }

    pub fn pool_seed(&self) -> u64 {
        self.pool_seed
    }

    pub fn free_slots(&self) -> usize {
        self.pool.len()
    }

    pub fn allocated(&self) -> usize {
        self.allocated
    }

    /// Takes the next slot of the shuffled pool.
    pub fn alloc_node(&mut self, node_size: u32) -> Result<SimAddress, MemError> {
        if node_size > self.slot_size || node_size > 4096 {
            return Err(MemError::NodeTooLarge {
                size: node_size,
                slot: self.slot_size,
            });
        }
        let base = self
            .pool
            .pop()
            .ok_or(MemError::PoolExhausted(self.allocated))?;
        self.allocated += 1;
        SimAddress::new(base)
    }

    pub fn read64(&self, addr: SimAddress) -> Result<u64, MemError> {
        if !addr.is_word_aligned() {
            return Err(MemError::Misaligned(addr.get()));
        }
        Ok(self.word(addr.get()))
    }

    pub fn write64(&mut self, addr: SimAddress, value: u64) -> Result<(), MemError> {
        if !addr.is_word_aligned() {
            return Err(MemError::Misaligned(addr.get()));
        }
        if value == 0 {
            self.words.remove(&addr.get());
        } else {
            self.words.insert(addr.get(), value);
        }
        Ok(())
    }

    /// Raw word lookup used by hardware models. Misaligned or unwritten
    /// addresses read as zero.
    pub fn word(&self, addr: u64) -> u64 {
        self.words.get(&addr).copied().unwrap_or(0)
    }
}
