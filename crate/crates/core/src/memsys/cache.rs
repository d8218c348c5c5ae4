use super::addr::{BlockAddr, BLOCK_SIZE};
use crate::error::ConfigError;

/// One resident cache line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub block: BlockAddr,
    /// Filled by a prefetch and not yet touched by a demand access.
    pub prefetched: bool,
    /// Touched by at least one demand access since it was filled.
    pub used: bool,
}

/// A set-associative cache with true LRU replacement.
///
/// Each set keeps its lines ordered from most to least recently used, so the
/// victim is always the last element. Sets are allocated lazily.
#[derive(Debug, Clone)]
pub struct CacheLevel {
    sets: Vec<Vec<Line>>,
    ways: usize,
    set_mask: u64,
    latency: u32,
}

impl CacheLevel {
    pub fn new(size_bytes: usize, ways: usize, latency: u32) -> Result<Self, ConfigError> {
        let lines = size_bytes / BLOCK_SIZE as usize;
        if ways == 0 || lines == 0 || lines % ways != 0 {
            return Err(ConfigError::Layout(format!(
                "{size_bytes} bytes cannot be split into {ways}-way sets"
            )));
        }
        let sets = lines / ways;
        if !sets.is_power_of_two() {
            return Err(ConfigError::NotPowerOfTwo {
                what: "set count",
                value: sets,
            });
        }
        Ok(CacheLevel {
            sets: vec![Vec::new(); sets],
            ways,
            set_mask: sets as u64 - 1,
            latency,
        })
    }

    pub fn latency(&self) -> u32 {
        self.latency
    }

    pub fn ways(&self) -> usize {
        self.ways
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn set_index(&self, block: BlockAddr) -> usize {
        (block.number() & self.set_mask) as usize
    }

    pub fn contains(&self, block: BlockAddr) -> bool {
        self.sets[self.set_index(block)]
            .iter()
            .any(|l| l.block == block)
    }

    /// Looks up `block` and, on a hit, moves it to the MRU position and
    /// returns the line as it was before the access.
    pub fn touch(&mut self, block: BlockAddr) -> Option<&mut Line> {
        let idx = self.set_index(block);
        let set = &mut self.sets[idx];
        let pos = set.iter().position(|l| l.block == block)?;
        set[..=pos].rotate_right(1);
        Some(&mut set[0])
    }

    /// Inserts `block` as MRU, returning the evicted LRU line if the set was
    /// full. The block must not already be resident.
    pub fn insert(&mut self, block: BlockAddr, prefetched: bool) -> Option<Line> {
        let ways = self.ways;
        let idx = self.set_index(block);
        let set = &mut self.sets[idx];
        debug_assert!(set.iter().all(|l| l.block != block));
        let victim = if set.len() == ways { set.pop() } else { None };
        set.insert(
            0,
            Line {
                block,
                prefetched,
                used: false,
            },
        );
        victim
    }

    pub fn invalidate(&mut self, block: BlockAddr) -> Option<Line> {
        let idx = self.set_index(block);
        let set = &mut self.sets[idx];
        let pos = set.iter().position(|l| l.block == block)?;
        Some(set.remove(pos))
    }

    /// Lines of one set from MRU to LRU.
    pub fn set_lines(&self, set: usize) -> &[Line] {
        &self.sets[set]
    }

    pub fn resident_blocks(&self) -> impl Iterator<Item = BlockAddr> + '_ {
        self.sets.iter().flatten().map(|l| l.block)
    }

    pub fn clear(&mut self) {
        self.sets.iter_mut().for_each(Vec::clear);
    }
}
