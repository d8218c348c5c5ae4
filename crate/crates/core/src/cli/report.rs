use std::io::Write;

use serde::Serialize;

use super::{PrefetcherKind, RunOutput};
use crate::error::MetricsError;
use crate::metrics::{geomean, normalize};
use crate::workloads::{Benchmark, Category};

pub const CSV_HEADER: &str = "benchmark,size,seed,prefetcher,at_entries,cat_entries,l1d_miss,l2_miss,l3_miss,prefetch_issued,prefetch_hits,accuracy,stall_cycles_proxy,at_insert,cat_insert,invalidations,evictions,bfq_push,bfq_drop";

/// One CSV line. Table sizes are 0 for prefetchers without tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub benchmark: String,
    pub size: String,
    pub seed: u64,
    pub prefetcher: String,
    pub at_entries: usize,
    pub cat_entries: usize,
    pub l1d_miss: u64,
    pub l2_miss: u64,
    pub l3_miss: u64,
    pub prefetch_issued: u64,
    pub prefetch_hits: u64,
    /// Fixed six decimals so reruns are byte-identical.
    pub accuracy: String,
    pub stall_cycles_proxy: u64,
    pub at_insert: u64,
    pub cat_insert: u64,
    pub invalidations: u64,
    pub evictions: u64,
    pub bfq_push: u64,
    pub bfq_drop: u64,
}

impl From<&RunOutput> for CsvRow {
    fn from(run: &RunOutput) -> Self {
        let r = &run.report;
        let c = &run.config;
        let (at, cat) = match c.prefetcher {
            PrefetcherKind::Linkey => (c.linkey.at_entries, c.linkey.cat_entries),
            _ => (0, 0),
        };
        CsvRow {
            benchmark: r.identity.benchmark.clone(),
            size: r.identity.size.clone(),
            seed: r.identity.seed,
            prefetcher: r.prefetcher.clone(),
            at_entries: at,
            cat_entries: cat,
            l1d_miss: r.l1d_misses,
            l2_miss: r.l2_misses,
            l3_miss: r.l3_misses,
            prefetch_issued: r.prefetches_issued,
            prefetch_hits: r.prefetch_hits,
            accuracy: format!("{:.6}", r.accuracy),
            stall_cycles_proxy: r.stall_cycles_proxy,
            at_insert: r.table.at_insertions,
            cat_insert: r.table.cat_insertions,
            invalidations: r.table.invalidations,
            evictions: r.table.evictions,
            bfq_push: r.table.bfq_pushes,
            bfq_drop: r.table.bfq_drops,
        }
    }
}

/// Writes the header and one row per run.
pub fn write_csv<W: Write>(out: W, runs: &[RunOutput]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for run in runs {
        w.serialize(CsvRow::from(run))?;
    }
    if runs.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

/// Subject vs. baseline on one (benchmark, size, seed).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRatio {
    pub benchmark: String,
    pub size: String,
    pub seed: u64,
    pub category: Category,
    pub l1d_miss_ratio: Option<f64>,
    pub accuracy_ratio: Option<f64>,
    pub subject_accuracy: f64,
    pub baseline_accuracy: f64,
}

/// Aggregate over one benchmark category, or all of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategorySummary {
    /// `lookup`, `traversal` or `overall`.
    pub group: String,
    pub runs: usize,
    /// Geomean over runs with a defined, positive ratio.
    pub l1d_miss_ratio_geomean: Option<f64>,
    pub accuracy_ratio_geomean: Option<f64>,
    pub subject_mean_accuracy: f64,
    pub baseline_mean_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub subject: PrefetcherKind,
    pub baseline: PrefetcherKind,
    pub per_benchmark: Vec<BenchmarkRatio>,
    pub groups: Vec<CategorySummary>,
}

fn positive_geomean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().filter(|&x| x > 0.0).collect();
    geomean(&v).ok()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn summarize(group: &str, rows: &[&BenchmarkRatio]) -> CategorySummary {
    CategorySummary {
        group: group.to_string(),
        runs: rows.len(),
        l1d_miss_ratio_geomean: positive_geomean(rows.iter().map(|r| r.l1d_miss_ratio)),
        accuracy_ratio_geomean: positive_geomean(rows.iter().map(|r| r.accuracy_ratio)),
        subject_mean_accuracy: mean(rows.iter().map(|r| r.subject_accuracy)),
        baseline_mean_accuracy: mean(rows.iter().map(|r| r.baseline_accuracy)),
    }
}

/// Pairs every `subject` run with the `baseline` run of the same identity and
/// aggregates the ratios per category and overall.
pub fn compare(
    runs: &[RunOutput],
    subject: PrefetcherKind,
    baseline: PrefetcherKind,
) -> Result<Comparison, MetricsError> {
    let mut per_benchmark = Vec::new();
    for s in runs.iter().filter(|r| r.config.prefetcher == subject) {
        let b = runs
            .iter()
            .find(|b| b.config.prefetcher == baseline && b.report.identity == s.report.identity)
            .ok_or_else(|| MetricsError::Mismatch(s.report.identity.to_string(), baseline.to_string()))?;
        let ratios = normalize(&s.report, &b.report)?;
        let bench: Benchmark = s.config.benchmark;
        per_benchmark.push(BenchmarkRatio {
            benchmark: bench.name().to_string(),
            size: s.report.identity.size.clone(),
            seed: s.report.identity.seed,
            category: bench.category(),
            l1d_miss_ratio: ratios.l1d_misses,
            accuracy_ratio: ratios.accuracy,
            subject_accuracy: s.report.accuracy,
            baseline_accuracy: b.report.accuracy,
        });
    }
    let mut groups = Vec::new();
    for cat in [Category::Lookup, Category::Traversal] {
        let rows: Vec<&BenchmarkRatio> = per_benchmark.iter().filter(|r| r.category == cat).collect();
        groups.push(summarize(&cat.to_string(), &rows));
    }
    let all: Vec<&BenchmarkRatio> = per_benchmark.iter().collect();
    groups.push(summarize("overall", &all));
    Ok(Comparison {
        subject,
        baseline,
        per_benchmark,
        groups,
    })
}

impl Comparison {
    pub fn overall(&self) -> &CategorySummary {
        self.groups.last().expect("overall group is always present")
    }

    /// Plain-text table for the terminal.
    pub fn render(&self) -> String {
        let fmt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        let mut s = format!(
            "{} vs {}\n{:<10} {:>5} {:>16} {:>16} {:>10} {:>10}\n",
            self.subject, self.baseline, "group", "runs", "l1d_miss_ratio", "accuracy_ratio", "acc_subj", "acc_base"
        );
        for g in &self.groups {
            s.push_str(&format!(
                "{:<10} {:>5} {:>16} {:>16} {:>10.4} {:>10.4}\n",
                g.group,
                g.runs,
                fmt(g.l1d_miss_ratio_geomean),
                fmt(g.accuracy_ratio_geomean),
                g.subject_mean_accuracy,
                g.baseline_mean_accuracy
            ));
        }
        s
    }
}
