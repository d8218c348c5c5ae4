//! A deterministic memory-hierarchy simulator for studying hardware prefetching
//! of linked data structures.
//!
//! The crate is organized around a single-core event loop ([`memsys`]) that
//! hosts a pluggable [`Prefetcher`]. Two prefetchers ship with it: the
//! table-based [`linkey::Linkey`] linked-data-structure prefetcher and the
//! [`baseline::StridePrefetcher`] it is compared against. The [`workloads`]
//! module builds fifteen pointer-based benchmarks in simulated memory and runs
//! their kernels through the hierarchy; [`metrics`] turns the counters into
//! reports, and [`cli`] wires everything into an experiment matrix.
//!
//! ```
//! use linkey::{RunConfig, Benchmark, Size, PrefetcherKind};
//!
//! let cfg = RunConfig::new(Benchmark::Ll, Size::Small, 7, PrefetcherKind::Linkey);
//! let run = linkey::execute(&cfg).unwrap();
//! assert!(run.report.prefetches_issued > 0);
//! ```

pub mod baseline;
pub mod cli;
pub mod error;
pub mod linkey;
pub mod memsys;
pub mod metrics;
pub mod workloads;

pub use crate::cli::{execute, Preset, PrefetcherKind, RunConfig, RunOutput};
pub use crate::error::{ConfigError, MemError, MetricsError, WorkloadError};
pub use crate::memsys::{
    AccessKind, AccessOutcome, BlockAddr, HierarchyConfig, IssueOutcome, Level, MemorySystem,
    PrefetchMeta, PrefetchRequest, Prefetcher, SimAddress, SimHeap,
};
pub use crate::metrics::{geomean, normalize, MetricsReport, NormalizedRatios, TableStats};
pub use crate::workloads::{Benchmark, Size};
