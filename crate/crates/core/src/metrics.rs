//! Run counters, derived statistics and cross-run aggregation.

use serde::Serialize;

use crate::error::MetricsError;
use crate::memsys::Counters;

/// Bookkeeping exposed by table-based prefetchers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TableStats {
    pub at_insertions: u64,
    pub cat_insertions: u64,
    /// Child associations removed from the CAT, whether because the pointer in
    /// memory changed or because an endpoint was evicted. Re-linking an
    /// unchanged pointer during a rebuild does not count.
    pub invalidations: u64,
    /// Entries of either table reclaimed to make room.
    pub evictions: u64,
    pub bfq_pushes: u64,
    /// Oldest queue entries discarded on overflow.
    pub bfq_drops: u64,
}

/// What a report describes; two reports are comparable only if these match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunIdentity {
    pub benchmark: String,
    pub size: String,
    pub seed: u64,
}

impl std::fmt::Display for RunIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.benchmark, self.size, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub identity: RunIdentity,
    pub prefetcher: String,
    pub kernel_accesses: u64,
    pub l1d_hits: u64,
    pub l1d_misses: u64,
    pub l2_misses: u64,
    pub l3_misses: u64,
    pub prefetches_issued: u64,
    pub prefetch_hits: u64,
    /// `prefetch_hits / prefetches_issued`, zero when nothing was issued.
    pub accuracy: f64,
    pub stall_cycles_proxy: u64,
    pub table: TableStats,
}

impl MetricsReport {
    pub fn from_counters(
        identity: RunIdentity,
        prefetcher: &str,
        c: &Counters,
        table: TableStats,
    ) -> Self {
        let accuracy = if c.prefetch_issued == 0 {
            0.0
        } else {
            c.prefetch_hits as f64 / c.prefetch_issued as f64
        };
        MetricsReport {
            identity,
            prefetcher: prefetcher.to_string(),
            kernel_accesses: c.accesses,
            l1d_hits: c.l1_hits,
            l1d_misses: c.misses[0],
            l2_misses: c.misses[1],
            l3_misses: c.misses[2],
            prefetches_issued: c.prefetch_issued,
            prefetch_hits: c.prefetch_hits,
            accuracy,
            stall_cycles_proxy: c.stall_cycles,
            table,
        }
    }
}

/// Per-metric ratios of a report against a baseline; `None` where the
/// baseline value is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedRatios {
    pub l1d_misses: Option<f64>,
    pub l2_misses: Option<f64>,
    pub l3_misses: Option<f64>,
    pub prefetch_hits: Option<f64>,
    pub accuracy: Option<f64>,
    pub stall_cycles: Option<f64>,
}

fn ratio(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| a / b)
}

pub fn normalize(
    report: &MetricsReport,
    baseline: &MetricsReport,
) -> Result<NormalizedRatios, MetricsError> {
    if report.identity != baseline.identity {
        return Err(MetricsError::Mismatch(
            report.identity.to_string(),
            baseline.identity.to_string(),
        ));
    }
    let r = |a: u64, b: u64| ratio(a as f64, b as f64);
    Ok(NormalizedRatios {
        l1d_misses: r(report.l1d_misses, baseline.l1d_misses),
        l2_misses: r(report.l2_misses, baseline.l2_misses),
        l3_misses: r(report.l3_misses, baseline.l3_misses),
        prefetch_hits: r(report.prefetch_hits, baseline.prefetch_hits),
        accuracy: if baseline.prefetches_issued == 0 {
            None
        } else {
            ratio(report.accuracy, baseline.accuracy)
        },
        stall_cycles: r(report.stall_cycles_proxy, baseline.stall_cycles_proxy),
    })
}

/// Geometric mean, `exp(mean(ln x))`.
pub fn geomean(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut log_sum = 0.0;
    for &v in values {
        if !(v > 0.0) {
            return Err(MetricsError::NonPositive(v));
        }
        log_sum += v.ln();
    }
    Ok((log_sum / values.len() as f64).exp())
}
