//! Striding L1-D prefetcher used as the comparison baseline.
//!
//! There are no program counters in this simulator, so the detector is a
//! single global entry: it tracks the last demand address, the last observed
//! stride and a 2-bit saturating confidence counter.

use std::collections::VecDeque;

use crate::memsys::{
    AccessKind, BlockAddr, PrefetchMeta, PrefetchRequest, Prefetcher, SimAddress, SimHeap, PAGE_SIZE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct StrideConfig {
    /// Candidates per trigger: `addr + k * stride` for `k = 1..=degree`.
    pub degree: u32,
    /// Minimum confidence before anything is emitted.
    pub threshold: u8,
}

impl Default for StrideConfig {
    fn default() -> Self {
        StrideConfig {
            degree: 2,
            threshold: 2,
        }
    }
}

const MAX_CONFIDENCE: u8 = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StrideEntry {
    pub last_addr: Option<u64>,
    pub stride: i64,
    pub confidence: u8,
}

#[derive(Debug, Clone, Default)]
pub struct StridePrefetcher {
    cfg: StrideConfig,
    entry: StrideEntry,
    output: VecDeque<PrefetchRequest>,
}

impl StridePrefetcher {
    pub fn new(cfg: StrideConfig) -> Self {
        StridePrefetcher {
            cfg,
            entry: StrideEntry::default(),
            output: VecDeque::new(),
        }
    }

    pub fn entry(&self) -> StrideEntry {
        self.entry
    }

    /// Trains on one demand address and returns the blocks to prefetch.
    ///
    /// The first access only records the address; the first stride seen after
    /// it starts at confidence 1, so three equally spaced accesses trigger.
    pub fn observe(&mut self, addr: u64) -> Vec<PrefetchRequest> {
        let e = &mut self.entry;
        let Some(last) = e.last_addr.replace(addr) else {
            return Vec::new();
        };
        let stride = addr.wrapping_sub(last) as i64;
        if e.confidence == 0 && e.stride == 0 {
            e.stride = stride;
            e.confidence = 1;
        } else if stride == e.stride {
            e.confidence = (e.confidence + 1).min(MAX_CONFIDENCE);
        } else {
            e.confidence = e.confidence.saturating_sub(1);
            e.stride = stride;
        }
        if e.confidence < self.cfg.threshold || e.stride == 0 {
            return Vec::new();
        }

        let page = addr / PAGE_SIZE;
        let own = addr & !63;
        let mut out: Vec<PrefetchRequest> = Vec::with_capacity(self.cfg.degree as usize);
        for k in 1..=i64::from(self.cfg.degree) {
            let Some(target) = e.stride.checked_mul(k).and_then(|d| addr.checked_add_signed(d)) else {
                break;
            };
            if target / PAGE_SIZE != page {
                continue;
            }
            let block = target & !63;
            if block == own || out.iter().any(|r| r.block.get() == block) {
                continue;
            }
            out.push(PrefetchRequest {
                block: BlockAddr::containing(block),
                meta: None,
            });
        }
        out
    }
}

impl Prefetcher for StridePrefetcher {
    fn name(&self) -> &'static str {
        "stride"
    }

    fn on_demand(&mut self, addr: SimAddress, _kind: AccessKind) {
        self.output.clear();
        let reqs = self.observe(addr.get());
        self.output.extend(reqs);
    }

    fn on_response(&mut self, _block: BlockAddr, _meta: Option<PrefetchMeta>, _heap: &SimHeap) {}

    fn pop_request(&mut self) -> Option<PrefetchRequest> {
        self.output.pop_front()
    }
}
