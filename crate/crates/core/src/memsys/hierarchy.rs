use serde::{Deserialize, Serialize};

use super::addr::BlockAddr;
use super::cache::CacheLevel;
use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheConfig {
    pub size_bytes: usize,
    pub ways: usize,
    pub latency: u32,
}

/// Geometry and latencies of the three-level hierarchy. The default is a
/// modern x86-64 server core: 48 KiB 12-way L1-D (5 cycles), 1 MiB 16-way L2
/// (16), 64 MiB 16-way L3 (34) and 160-cycle DRAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyConfig {
    pub l1d: CacheConfig,
    pub l2: CacheConfig,
    pub l3: CacheConfig,
    pub dram_latency: u32,
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        HierarchyConfig {
            l1d: CacheConfig {
                size_bytes: 48 * 1024,
                ways: 12,
                latency: 5,
            },
            l2: CacheConfig {
                size_bytes: 1024 * 1024,
                ways: 16,
                latency: 16,
            },
            l3: CacheConfig {
                size_bytes: 64 * 1024 * 1024,
                ways: 16,
                latency: 34,
            },
            dram_latency: 160,
        }
    }
}

/// Level that satisfied an access.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Level {
    L1,
    L2,
    L3,
    Dram,
}

/// Result of a demand lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DemandLookup {
    pub level: Level,
    pub latency: u32,
    /// The L1 line was prefetched and this is its first demand use.
    pub prefetched_first_use: bool,
}

/// Inclusive L1-D/L2/L3 hierarchy. A miss fills every level above the one
/// that hit; an eviction from a lower level back-invalidates the upper ones so
/// that inclusion always holds.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    levels: [CacheLevel; 3],
    dram_latency: u32,
}

impl Hierarchy {
    pub fn new(cfg: &HierarchyConfig) -> Result<Self, ConfigError> {
        let mk = |c: &CacheConfig| CacheLevel::new(c.size_bytes, c.ways, c.latency);
        Ok(Hierarchy {
            levels: [mk(&cfg.l1d)?, mk(&cfg.l2)?, mk(&cfg.l3)?],
            dram_latency: cfg.dram_latency,
        })
    }

    pub fn l1(&self) -> &CacheLevel {
        &self.levels[0]
    }

    pub fn level(&self, i: usize) -> &CacheLevel {
        &self.levels[i]
    }

    pub fn in_l1(&self, block: BlockAddr) -> bool {
        self.levels[0].contains(block)
    }

    pub fn demand(&mut self, block: BlockAddr) -> DemandLookup {
        if let Some(line) = self.levels[0].touch(block) {
            let first_use = std::mem::replace(&mut line.prefetched, false);
            line.used = true;
            return DemandLookup {
                level: Level::L1,
                latency: self.levels[0].latency(),
                prefetched_first_use: first_use,
            };
        }
        let (level, latency) = self.fill(block, false);
        if let Some(line) = self.levels[0].touch(block) {
            line.used = true;
        }
        DemandLookup {
            level,
            latency,
            prefetched_first_use: false,
        }
    }

    /// Fills `block` into the L1-D as a prefetch. Returns `None` when the block
    /// is already resident in the L1-D, otherwise the level that supplied it.
    pub fn prefetch(&mut self, block: BlockAddr) -> Option<Level> {
        if self.levels[0].contains(block) {
            return None;
        }
        Some(self.fill(block, true).0)
    }

    // Caller guarantees `block` is not in the L1-D.
    fn fill(&mut self, block: BlockAddr, prefetched: bool) -> (Level, u32) {
        let found = (1..3).find(|&i| self.levels[i].touch(block).is_some());
        let (level, latency) = match found {
            Some(1) => (Level::L2, self.levels[1].latency()),
            Some(_) => (Level::L3, self.levels[2].latency()),
            None => (Level::Dram, self.dram_latency),
        };
        let lowest_missing = found.unwrap_or(3);
        for i in (0..lowest_missing).rev() {
            if let Some(victim) = self.levels[i].insert(block, prefetched && i == 0) {
                for upper in 0..i {
                    self.levels[upper].invalidate(victim.block);
                }
            }
        }
        (level, latency)
    }

    pub fn clear(&mut self) {
        self.levels.iter_mut().for_each(CacheLevel::clear);
    }
}
