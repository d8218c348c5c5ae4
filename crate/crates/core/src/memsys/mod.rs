//! Simulated address space, cache hierarchy and the event loop that hosts a
//! prefetcher.

mod addr;
mod cache;
mod heap;
mod hierarchy;
mod prefetch;
mod system;

pub use addr::{BlockAddr, SimAddress, ADDRESS_BITS, BLOCK_SIZE, PAGE_SIZE};
pub use cache::{CacheLevel, Line};
pub use heap::{SimHeap, POOL_BASE};
pub use hierarchy::{CacheConfig, Hierarchy, HierarchyConfig, Level};
pub use prefetch::{NullPrefetcher, PrefetchMeta, PrefetchRequest, Prefetcher};
pub use system::{AccessKind, AccessOutcome, Counters, IssueOutcome, MemorySystem};
