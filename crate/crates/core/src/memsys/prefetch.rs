use super::addr::{BlockAddr, SimAddress};
use super::heap::SimHeap;
use super::system::AccessKind;
use crate::error::ConfigError;
use crate::linkey::LdsCommand;
use crate::metrics::TableStats;

/// Locates the node a prefetch was issued for: the signed byte offset of the
/// node base from the start of the fetched block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrefetchMeta {
    pub object_offset: i64,
}

impl PrefetchMeta {
    pub fn node_base(self, block: BlockAddr) -> u64 {
        block.get().wrapping_add_signed(self.object_offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrefetchRequest {
    pub block: BlockAddr,
    pub meta: Option<PrefetchMeta>,
}

/// The interface every prefetcher exposes to the memory system.
///
/// Per demand access the memory system calls [`on_demand`](Prefetcher::on_demand)
/// with the full address, drains requests with
/// [`pop_request`](Prefetcher::pop_request), and reports every response
/// (demand loads, completed stores, prefetch fills) through
/// [`on_response`](Prefetcher::on_response).
pub trait Prefetcher: Send {
    fn name(&self) -> &'static str;

    fn on_demand(&mut self, addr: SimAddress, kind: AccessKind);

    fn on_response(&mut self, block: BlockAddr, meta: Option<PrefetchMeta>, heap: &SimHeap);

    fn pop_request(&mut self) -> Option<PrefetchRequest>;

    /// Software configuration channel. Prefetchers that take no hints ignore it.
    fn configure(&mut self, _cmd: LdsCommand) -> Result<(), ConfigError> {
        Ok(())
    }

    fn table_stats(&self) -> TableStats {
        TableStats::default()
    }
}

/// Issues nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullPrefetcher;

impl Prefetcher for NullPrefetcher {
    fn name(&self) -> &'static str {
        "none"
    }

    fn on_demand(&mut self, _addr: SimAddress, _kind: AccessKind) {}

    fn on_response(&mut self, _block: BlockAddr, _meta: Option<PrefetchMeta>, _heap: &SimHeap) {}

    fn pop_request(&mut self) -> Option<PrefetchRequest> {
        None
    }
}
