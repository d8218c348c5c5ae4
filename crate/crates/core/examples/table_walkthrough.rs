//! Drives the prefetcher tables by hand on a three-node list and prints what
//! they learn and what they request.

use linkey::linkey::{LdsCommand, Linkey, LinkeyConfig};
use linkey::memsys::{BlockAddr, SimAddress, SimHeap};

fn dump(lk: &Linkey) {
    for (i, e) in lk.at_entries().iter().enumerate().filter(|(_, e)| e.valid) {
        let kids: Vec<u32> = e.children.iter().filter(|s| s.valid).map(|s| s.cat_index).collect();
        println!("  AT[{i}] base {:#x} used={} built={} cat={kids:?}", e.base, e.used_lru, e.just_built);
    }
    for (i, c) in lk.cat_entries().iter().enumerate().filter(|(_, c)| c.valid) {
        println!("  CAT[{i}] AT[{}] -> AT[{}] via offset #{}", c.parent, c.child, c.offset_index);
    }
}

fn main() {
    // {value, next} nodes placed a few blocks apart
    let nodes = [0x1000u64, 0x1400, 0x1800];
    let mut heap = SimHeap::new();
    for (i, &n) in nodes.iter().enumerate() {
        heap.write64(SimAddress::new(n).unwrap(), 10 * (i as u64 + 1)).unwrap();
        let next = nodes.get(i + 1).copied().unwrap_or(0);
        heap.write64(SimAddress::new(n + 8).unwrap(), next).unwrap();
    }

    let mut lk = Linkey::new(LinkeyConfig::new(8, 16)).unwrap();
    for cmd in [
        LdsCommand::Reset,
        LdsCommand::SetSize(16),
        LdsCommand::AddOffset(8),
        LdsCommand::SetRoot { slot: 0, addr: nodes[0] },
    ] {
        lk.apply(cmd).unwrap();
    }
    println!("after configuration:");
    dump(&lk);

    // first pass: the demand responses teach the tables the chain
    for &n in &nodes {
        let reqs = lk.handle_core_req(n);
        println!("access {n:#x}: {} requests", reqs.len());
        lk.build_table(BlockAddr::containing(n), &heap);
    }
    println!("after one traversal:");
    dump(&lk);

    // second pass: touching the root walks the learned chain
    let reqs = lk.handle_core_req(nodes[0]);
    let blocks: Vec<String> = reqs.iter().map(|r| format!("{:#x}", r.block.get())).collect();
    println!("root access requests {blocks:?}");
    println!("{:?}", lk.stats());
}
