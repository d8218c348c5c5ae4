//! Experiment harness: run configurations, the benchmark matrix, CSV/JSON
//! reports and the command-line entry point.

mod args;
mod report;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use args::{run, run_with, Args};
pub use report::{
    compare, write_csv, CategorySummary, Comparison, CsvRow, CSV_HEADER,
};

use crate::baseline::{StrideConfig, StridePrefetcher};
use crate::error::{ConfigError, WorkloadError};
use crate::linkey::{hardware_size_bytes, Linkey, LinkeyConfig};
use crate::memsys::{HierarchyConfig, MemorySystem, NullPrefetcher, Prefetcher};
use crate::metrics::{MetricsReport, RunIdentity};
use crate::workloads::{Benchmark, Size, Workload};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrefetcherKind {
    None,
    Stride,
    Linkey,
}

impl PrefetcherKind {
    pub const ALL: [PrefetcherKind; 3] = [PrefetcherKind::None, PrefetcherKind::Stride, PrefetcherKind::Linkey];

    pub fn name(self) -> &'static str {
        match self {
            PrefetcherKind::None => "none",
            PrefetcherKind::Stride => "stride",
            PrefetcherKind::Linkey => "linkey",
        }
    }
}

impl fmt::Display for PrefetcherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PrefetcherKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PrefetcherKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown prefetcher `{s}`"))
    }
}

/// The three benchmarked table sizings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    A64C256,
    A256C1024,
    A1024C4096,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::A64C256, Preset::A256C1024, Preset::A1024C4096];

    pub fn name(self) -> &'static str {
        match self {
            Preset::A64C256 => "pre_lds_a64_c256",
            Preset::A256C1024 => "pre_lds_a256_c1024",
            Preset::A1024C4096 => "pre_lds_a1024_c4096",
        }
    }

    /// `(AT entries, CAT entries)`.
    pub fn entries(self) -> (usize, usize) {
        match self {
            Preset::A64C256 => (64, 256),
            Preset::A256C1024 => (256, 1024),
            Preset::A1024C4096 => (1024, 4096),
        }
    }

    pub fn linkey_config(self) -> LinkeyConfig {
        let (at, cat) = self.entries();
        LinkeyConfig::new(at, cat)
    }

    pub fn hardware_size_bytes(self) -> f64 {
        let (at, cat) = self.entries();
        hardware_size_bytes(at, cat).expect("preset sizes are powers of two")
    }
}

impl FromStr for Preset {
    type Err = ConfigError;

    /// Accepts the full name or the part after `pre_lds_`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let short = s.strip_prefix("pre_lds_").unwrap_or(s);
        Preset::ALL
            .into_iter()
            .find(|p| p.name().strip_prefix("pre_lds_") == Some(short))
            .ok_or_else(|| ConfigError::UnknownPreset(s.to_string()))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything that determines one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub benchmark: Benchmark,
    pub size: Size,
    pub seed: u64,
    pub prefetcher: PrefetcherKind,
    pub linkey: LinkeyConfig,
    pub stride: StrideConfig,
    pub drain_per_event: usize,
    pub hierarchy: HierarchyConfig,
}

impl RunConfig {
    /// Default hierarchy and the 256/1024-entry table sizing.
    pub fn new(benchmark: Benchmark, size: Size, seed: u64, prefetcher: PrefetcherKind) -> Self {
        RunConfig {
            benchmark,
            size,
            seed,
            prefetcher,
            linkey: Preset::A256C1024.linkey_config(),
            stride: StrideConfig::default(),
            drain_per_event: 2,
            hierarchy: HierarchyConfig::default(),
        }
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        let (at, cat) = preset.entries();
        self.linkey.at_entries = at;
        self.linkey.cat_entries = cat;
        self
    }

    pub fn with_prefetcher(mut self, prefetcher: PrefetcherKind) -> Self {
        self.prefetcher = prefetcher;
        self
    }

    pub fn build_prefetcher(&self) -> Result<Box<dyn Prefetcher>, ConfigError> {
        Ok(match self.prefetcher {
            PrefetcherKind::None => Box::new(NullPrefetcher),
            PrefetcherKind::Stride => Box::new(StridePrefetcher::new(self.stride)),
            PrefetcherKind::Linkey => Box::new(Linkey::new(self.linkey)?),
        })
    }

    pub fn identity(&self) -> RunIdentity {
        RunIdentity {
            benchmark: self.benchmark.name().to_string(),
            size: self.size.name().to_string(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub config: RunConfig,
    pub report: MetricsReport,
    /// Kernel result; independent of the prefetcher and the hierarchy.
    pub checksum: u64,
}

/// Builds the workload, configures the prefetcher outside the measured
/// region, runs the kernel and collects the report.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput, WorkloadError> {
    let workload = Workload::generate(cfg.benchmark, cfg.size, cfg.seed);
    let mut heap = workload.heap();
    let structure = workload.build(&mut heap)?;
    let mut mem = MemorySystem::new(heap, &cfg.hierarchy, cfg.build_prefetcher()?, cfg.drain_per_event)?;
    for cmd in structure.lds_commands() {
        mem.configure(cmd)?;
    }
    mem.reset_counters();
    let checksum = workload.run(&structure, &mut mem)?;
    mem.settle();
    let report = MetricsReport::from_counters(
        cfg.identity(),
        mem.prefetcher().name(),
        &mem.counters(),
        mem.prefetcher().table_stats(),
    );
    Ok(RunOutput {
        config: cfg.clone(),
        report,
        checksum,
    })
}

/// Runs every configuration on the rayon pool; results are sorted by
/// (benchmark, size, prefetcher, seed) regardless of completion order.
pub fn run_matrix(configs: &[RunConfig]) -> Result<Vec<RunOutput>, WorkloadError> {
    let mut out = configs
        .par_iter()
        .map(execute)
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by_key(|r| {
        let c = &r.config;
        (c.benchmark, c.size, c.prefetcher, c.seed)
    });
    Ok(out)
}
