use std::collections::VecDeque;

use super::addr::{BlockAddr, SimAddress};
use super::heap::SimHeap;
use super::hierarchy::{Hierarchy, HierarchyConfig, Level};
use super::prefetch::{PrefetchMeta, Prefetcher};
use crate::error::{ConfigError, MemError};
use crate::linkey::LdsCommand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessKind {
    Read,
    Write,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessOutcome {
    pub hit_level: Level,
    pub latency: u32,
    pub was_prefetched_first_use: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IssueOutcome {
    Issued,
    /// Block already resident in the L1-D; not counted as issued.
    Dropped,
}

/// Raw event counters of the current measurement region.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub accesses: u64,
    pub l1_hits: u64,
    /// Demand misses at L1-D, L2 and L3.
    pub misses: [u64; 3],
    pub stall_cycles: u64,
    pub prefetch_issued: u64,
    pub prefetch_dropped: u64,
    pub prefetch_hits: u64,
}

/// Single-core memory system: simulated heap, inclusive cache hierarchy and an
/// attached prefetcher, driven one demand access at a time.
///
/// Each demand access runs, in order: the prefetcher's demand hook, a drain of
/// up to `drain_per_event` requests, the cache lookup and fill, the response to
/// the prefetcher, another drain, and finally every response produced by the
/// issued prefetches (each followed by its own drain) until none remain.
pub struct MemorySystem {
    heap: SimHeap,
    caches: Hierarchy,
    prefetcher: Box<dyn Prefetcher>,
    pending: VecDeque<(BlockAddr, Option<PrefetchMeta>)>,
    drain_per_event: usize,
    counters: Counters,
}

impl MemorySystem {
    pub fn new(
        heap: SimHeap,
        cfg: &HierarchyConfig,
        prefetcher: Box<dyn Prefetcher>,
        drain_per_event: usize,
    ) -> Result<Self, ConfigError> {
        Ok(MemorySystem {
            heap,
            caches: Hierarchy::new(cfg)?,
            prefetcher,
            pending: VecDeque::new(),
            drain_per_event,
            counters: Counters::default(),
        })
    }

    /// Default hierarchy, two prefetches drained per event.
    pub fn with_prefetcher(heap: SimHeap, prefetcher: Box<dyn Prefetcher>) -> Self {
        Self::new(heap, &HierarchyConfig::default(), prefetcher, 2)
            .expect("default hierarchy is valid")
    }

    pub fn heap(&self) -> &SimHeap {
        &self.heap
    }

    pub fn heap_mut(&mut self) -> &mut SimHeap {
        &mut self.heap
    }

    pub fn caches(&self) -> &Hierarchy {
        &self.caches
    }

    pub fn prefetcher(&self) -> &dyn Prefetcher {
        self.prefetcher.as_ref()
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    /// Starts a new measurement region.
    pub fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }

    pub fn configure(&mut self, cmd: LdsCommand) -> Result<(), ConfigError> {
        self.prefetcher.configure(cmd)
    }

    /// Loads a word through the hierarchy.
    pub fn load(&mut self, addr: SimAddress) -> Result<u64, MemError> {
        let value = self.heap.read64(addr)?;
        self.access(addr, AccessKind::Read);
        Ok(value)
    }

    /// Stores a word; the prefetcher observes the block after the store lands.
    pub fn store(&mut self, addr: SimAddress, value: u64) -> Result<(), MemError> {
        self.heap.write64(addr, value)?;
        self.access(addr, AccessKind::Write);
        Ok(())
    }

    /// One demand access. Does not touch heap contents.
    pub fn access(&mut self, addr: SimAddress, kind: AccessKind) -> AccessOutcome {
        self.prefetcher.on_demand(addr, kind);
        self.drain();

        let block = addr.block();
        let lookup = self.caches.demand(block);
        let c = &mut self.counters;
        c.accesses += 1;
        c.stall_cycles += u64::from(lookup.latency);
        match lookup.level {
            Level::L1 => c.l1_hits += 1,
            Level::L2 => c.misses[0] += 1,
            Level::L3 => {
                c.misses[0] += 1;
                c.misses[1] += 1;
            }
            Level::Dram => c.misses.iter_mut().for_each(|m| *m += 1),
        }
        if lookup.prefetched_first_use {
            c.prefetch_hits += 1;
        }

        self.prefetcher.on_response(block, None, &self.heap);
        self.drain();
        self.settle();

        AccessOutcome {
            hit_level: lookup.level,
            latency: lookup.latency,
            was_prefetched_first_use: lookup.prefetched_first_use,
        }
    }

    /// Fills `block` into the L1-D as a non-exclusive read. The response is
    /// queued and delivered by [`settle`](Self::settle) (which every demand
    /// access runs).
    pub fn issue_prefetch(&mut self, block: BlockAddr, meta: Option<PrefetchMeta>) -> IssueOutcome {
        match self.caches.prefetch(block) {
            None => {
                self.counters.prefetch_dropped += 1;
                IssueOutcome::Dropped
            }
            Some(_) => {
                self.counters.prefetch_issued += 1;
                self.pending.push_back((block, meta));
                IssueOutcome::Issued
            }
        }
    }

    /// Delivers queued prefetch responses, draining after each one.
    pub fn settle(&mut self) {
        while let Some((block, meta)) = self.pending.pop_front() {
            self.prefetcher.on_response(block, meta, &self.heap);
            self.drain();
        }
    }

    fn drain(&mut self) {
        for _ in 0..self.drain_per_event {
            match self.prefetcher.pop_request() {
                Some(req) => {
                    self.issue_prefetch(req.block, req.meta);
                }
                None => break,
            }
        }
    }
}
