use linkey::{execute, Benchmark, PrefetcherKind, RunConfig, Size};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let size = std::env::args().nth(1).map_or(Ok(Size::Small), |s| s.parse())?;
    for b in [Benchmark::Ll, Benchmark::LlReverse, Benchmark::Dll] {
        for p in PrefetcherKind::ALL {
            let run = execute(&RunConfig::new(b, size, 1, p))?;
            let r = &run.report;
            println!(
                "{:<11} {:<7} accesses {:>7}  l1d misses {:>6}  issued {:>6}  accuracy {:.3}",
                b.name(),
                p.name(),
                r.kernel_accesses,
                r.l1d_misses,
                r.prefetches_issued,
                r.accuracy
            );
        }
    }
    Ok(())
}
