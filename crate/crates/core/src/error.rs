use thiserror::Error;

/// Errors raised by the simulated address space.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MemError {
    #[error("address {0:#x} is not 8-byte aligned")]
    Misaligned(u64),
    #[error("address {0:#x} does not fit in 48 bits")]
    OutOfRange(u64),
    #[error("node pool exhausted after {0} allocations")]
    PoolExhausted(usize),
    #[error("node size {size} exceeds the pool slot size {slot}")]
    NodeTooLarge { size: u32, slot: u32 },
}

/// Errors raised while configuring a prefetcher or a run.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("at most {0} child offsets are supported")]
    TooManyOffsets(usize),
    #[error("invalid node layout: {0}")]
    Layout(String),
    #[error("root slot {0} out of range (4 slots)")]
    RootSlot(usize),
    #[error("no address table entry available for root {0:#x}")]
    RootCapacity(u64),
    #[error("{what} must be a power of two, got {value}")]
    NotPowerOfTwo { what: &'static str, value: usize },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("cannot compare runs of different identity: {0} vs {1}")]
    Mismatch(String, String),
    #[error("geomean requires positive values, got {0}")]
    NonPositive(f64),
    #[error("geomean of an empty set")]
    Empty,
}

#[derive(Debug, Error)]
pub enum WorkloadError {
    #[error(transparent)]
    Mem(#[from] MemError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}
