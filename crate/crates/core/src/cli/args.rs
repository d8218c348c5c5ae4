use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::Parser;

use super::{compare, run_matrix, write_csv, Preset, PrefetcherKind, RunConfig};
use crate::workloads::{Benchmark, Size};

const SEED_ENV: &str = "LINKEY_SEED";
const DEFAULT_SEED: u64 = 1;

/// Run linked-data-structure prefetching experiments in the simulated
/// memory hierarchy and report one CSV row per run.
#[derive(Debug, Parser)]
#[command(name = "linkey-sim", version)]
pub struct Args {
    /// Benchmark name, comma separated list, or `all`.
    #[arg(long, default_value = "all")]
    pub benchmark: String,

    /// small, large, huge, comma separated list, or `all`.
    #[arg(long, default_value = "small")]
    pub size: String,

    /// none, stride, linkey, comma separated list, or `all`.
    #[arg(long, default_value = "linkey")]
    pub prefetcher: String,

    /// Table sizing: a64_c256, a256_c1024 or a1024_c4096 (optionally
    /// prefixed with pre_lds_).
    #[arg(long, default_value = "a256_c1024")]
    pub preset: String,

    /// Override the preset's AT entry count.
    #[arg(long)]
    pub at_entries: Option<usize>,

    /// Override the preset's CAT entry count.
    #[arg(long)]
    pub cat_entries: Option<usize>,

    #[arg(long, default_value_t = 8)]
    pub bfq_entries: usize,

    /// Prefetch requests produced per demand access.
    #[arg(long, default_value_t = 8)]
    pub output_cap: usize,

    /// Prefetches issued per event.
    #[arg(long, default_value_t = 2)]
    pub drain: usize,

    /// Seed; falls back to $LINKEY_SEED, then 1.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Also run this baseline and summarize the linkey/baseline ratios.
    #[arg(long)]
    pub compare: Option<String>,

    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Write the runs and the comparison summary as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,

    /// Print the hardware budget of the preset in bytes and exit.
    #[arg(long)]
    pub print_hw_size: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

fn list<T: std::str::FromStr<Err = String>>(s: &str, all: &[T]) -> Result<Vec<T>, Failure>
where
    T: Copy,
{
    if s == "all" {
        return Ok(all.to_vec());
    }
    s.split(',').map(|x| x.trim().parse::<T>().map_err(Failure::Usage)).collect()
}

fn seed(arg: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = arg {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn execute_args(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let preset: Preset = args.preset.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
    if args.print_hw_size {
        let (at, cat) = preset.entries();
        let at = args.at_entries.unwrap_or(at);
        let cat = args.cat_entries.unwrap_or(cat);
        let bytes = crate::linkey::hardware_size_bytes(at, cat).map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(out, "{bytes}").map_err(|e| Failure::Run(e.to_string()))?;
        return Ok(());
    }

    let benchmarks = list(&args.benchmark, &Benchmark::ALL)?;
    let sizes = list(&args.size, &Size::ALL)?;
    let mut prefetchers = list(&args.prefetcher, &PrefetcherKind::ALL)?;
    let baseline = match &args.compare {
        Some(b) => {
            let b: PrefetcherKind = b.parse().map_err(Failure::Usage)?;
            if !prefetchers.contains(&b) {
                prefetchers.push(b);
            }
            if !prefetchers.contains(&PrefetcherKind::Linkey) {
                prefetchers.push(PrefetcherKind::Linkey);
            }
            Some(b)
        }
        None => None,
    };
    let seed = seed(args.seed)?;

    let mut configs = Vec::new();
    for &b in &benchmarks {
        for &s in &sizes {
            for &p in &prefetchers {
                let mut c = RunConfig::new(b, s, seed, p).with_preset(preset);
                if let Some(at) = args.at_entries {
                    c.linkey.at_entries = at;
                }
                if let Some(cat) = args.cat_entries {
                    c.linkey.cat_entries = cat;
                }
                c.linkey.bfq_entries = args.bfq_entries;
                c.linkey.output_capacity = args.output_cap;
                c.drain_per_event = args.drain;
                configs.push(c);
            }
        }
    }
    let runs = run_matrix(&configs).map_err(|e| Failure::Usage(e.to_string()))?;

    match &args.csv {
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?;
            write_csv(f, &runs).map_err(|e| Failure::Run(e.to_string()))?;
        }
        None => write_csv(&mut *out, &runs).map_err(|e| Failure::Run(e.to_string()))?,
    }

    let comparison = match baseline {
        Some(b) => {
            let c = compare(&runs, PrefetcherKind::Linkey, b).map_err(|e| Failure::Run(e.to_string()))?;
            write!(err, "{}", c.render()).map_err(|e| Failure::Run(e.to_string()))?;
            Some(c)
        }
        None => None,
    };

    if let Some(path) = &args.json {
        let reports: Vec<_> = runs.iter().map(|r| &r.report).collect();
        let doc = serde_json::json!({
            "runs": reports,
            "comparison": comparison,
        });
        let f = File::create(path).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?;
        serde_json::to_writer_pretty(f, &doc).map_err(|e| Failure::Run(e.to_string()))?;
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs. Returns the process exit
/// code: 0 on success, 1 when running or writing reports fails, 2 on usage
/// errors.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute_args(&args, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Run(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
