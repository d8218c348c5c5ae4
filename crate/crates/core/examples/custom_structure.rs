//! A structure the crate does not ship: a circular ring of 4-ary nodes
//! `{value, next, skip[3]}` described to the prefetcher by hand and walked
//! through the memory system.

use linkey::baseline::StridePrefetcher;
use linkey::linkey::{LdsCommand, Linkey, LinkeyConfig};
use linkey::memsys::{MemorySystem, Prefetcher, SimHeap};
use linkey::workloads::Memory;

const NODE: u32 = 40;
const COUNT: usize = 3000;

fn build(heap: &mut SimHeap) -> Vec<u64> {
    let nodes: Vec<u64> = (0..COUNT).map(|_| heap.alloc(NODE).unwrap()).collect();
    for (i, &n) in nodes.iter().enumerate() {
        heap.store(n, i as u64).unwrap();
        heap.store(n + 8, nodes[(i + 1) % COUNT]).unwrap();
        for k in 0..3u64 {
            heap.store(n + 16 + 8 * k, nodes[(i + 7 * (k as usize + 1)) % COUNT]).unwrap();
        }
    }
    nodes
}

fn walk(prefetcher: Box<dyn Prefetcher>, configure: bool) -> (u64, u64, u64) {
    let mut heap = SimHeap::with_pool(3, COUNT, NODE);
    let nodes = build(&mut heap);
    let mut mem = MemorySystem::with_prefetcher(heap, prefetcher);
    if configure {
        let mut cmds = vec![LdsCommand::Reset, LdsCommand::SetSize(NODE)];
        cmds.extend((1..5).map(|k| LdsCommand::AddOffset(8 * k)));
        cmds.push(LdsCommand::SetRoot { slot: 0, addr: nodes[0] });
        cmds.into_iter().for_each(|c| mem.configure(c).unwrap());
    }
    // two laps along `next`
    let mut cur = nodes[0];
    let mut sum = 0u64;
    for _ in 0..2 * COUNT {
        sum = sum.wrapping_add(Memory::load(&mut mem, cur).unwrap());
        cur = Memory::load(&mut mem, cur + 8).unwrap();
    }
    mem.settle();
    let c = mem.counters();
    (sum, c.misses[0], c.prefetch_issued)
}

fn main() {
    let lk = Linkey::new(LinkeyConfig::new(256, 1024)).unwrap();
    for (name, p, cfg) in [
        ("stride", Box::new(StridePrefetcher::default()) as Box<dyn Prefetcher>, false),
        ("linkey", Box::new(lk), true),
    ] {
        let (sum, misses, issued) = walk(p, cfg);
        println!("{name:<7} sum {sum}  l1d misses {misses}  prefetches {issued}");
    }
}
