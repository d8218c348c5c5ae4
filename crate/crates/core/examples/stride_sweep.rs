use linkey::baseline::StridePrefetcher;
use linkey::memsys::{MemorySystem, SimHeap};
use linkey::workloads::{array_sweep, ArraySweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let array = ArraySweep::new(1 << 15);
    let mut heap = SimHeap::new();
    array.fill(&mut heap)?;
    let mut mem = MemorySystem::with_prefetcher(heap, Box::new(StridePrefetcher::default()));
    let sum = array_sweep(&mut mem, &array)?;
    mem.settle();
    let c = mem.counters();
    println!("sum {sum}");
    println!("accesses {}  l1d misses {}  stall cycles {}", c.accesses, c.misses[0], c.stall_cycles);
    println!(
        "prefetches issued {}  useful {}  accuracy {:.3}",
        c.prefetch_issued,
        c.prefetch_hits,
        c.prefetch_hits as f64 / c.prefetch_issued.max(1) as f64
    );
    Ok(())
}
