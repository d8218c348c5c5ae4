//! Every benchmark with both prefetchers, then the per-category summary.
//! `cargo run --release --example suite -- large 3`

use linkey::cli::{compare, run_matrix};
use linkey::{Benchmark, PrefetcherKind, RunConfig, Size};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let size: Size = args.next().map_or(Ok(Size::Small), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse())?;

    let configs: Vec<RunConfig> = Benchmark::ALL
        .iter()
        .flat_map(|&b| {
            [PrefetcherKind::Stride, PrefetcherKind::Linkey]
                .map(|p| RunConfig::new(b, size, seed, p))
        })
        .collect();
    let runs = run_matrix(&configs)?;
    let cmp = compare(&runs, PrefetcherKind::Linkey, PrefetcherKind::Stride)?;
    for r in &cmp.per_benchmark {
        println!(
            "{:<20} miss ratio {:>7}  accuracy {:.3} vs {:.3}",
            r.benchmark,
            r.l1d_miss_ratio.map_or("-".into(), |x| format!("{x:.3}")),
            r.subject_accuracy,
            r.baseline_accuracy
        );
    }
    println!();
    print!("{}", cmp.render());
    Ok(())
}
