use super::*;
use crate::memsys::SimAddress;

fn addr(v: u64) -> SimAddress {
    SimAddress::new(v).unwrap()
}

fn linkey(at: usize, cat: usize) -> Linkey {
    Linkey::new(LinkeyConfig::new(at, cat)).unwrap()
}

/// 16-byte nodes with a single child pointer at offset 8.
fn list_prefetcher() -> Linkey {
    let mut l = linkey(16, 32);
    l.set_size(16).unwrap();
    l.add_offset(8).unwrap();
    l
}

fn block(a: u64) -> BlockAddr {
    BlockAddr::containing(a)
}

#[test]
fn reset_clears_everything() {
    let mut l = list_prefetcher();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    l.bfq.push(0x9000);
    l.reset();
    assert!(l.at_entries().iter().all(|e| !e.valid));
    assert!(l.cat_entries().iter().all(|e| !e.valid));
    assert!(l.bfq().is_empty());
    assert_eq!(l.roots(), [None; 4]);
    assert!(!l.layout().is_configured());
    assert!(l.handle_core_req(0x1000).is_empty());
}

#[test]
fn configuration_errors() {
    let mut l = linkey(16, 32);
    assert!(matches!(l.apply(LdsCommand::SetSize(4097)), Err(ConfigError::Layout(_))));
    assert_eq!(l.set_root(4, 0x1000), Err(ConfigError::RootSlot(4)));
    l.set_size(128).unwrap();
    for k in 0..8 {
        l.add_offset(8 * k).unwrap();
    }
    assert_eq!(l.add_offset(72), Err(ConfigError::TooManyOffsets(8)));
}

#[test]
fn root_hit_after_set_root() {
    let mut l = list_prefetcher();
    l.set_root(0, 0x1000).unwrap();
    let idx = l.roots()[0].unwrap();
    assert_eq!(l.search_at(0x1000), Some(idx));
}

#[test]
fn root_bound_is_half_open() {
    let mut l = linkey(16, 32);
    l.set_size(64).unwrap();
    l.set_root(0, 0x1000).unwrap();
    assert!(l.search_roots(0x103F).is_some());
    assert!(l.search_roots(0x1040).is_none());
}

#[test]
fn repeated_root_access_keeps_key_offset() {
    let mut l = linkey(16, 32);
    l.set_size(64).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.search_roots(0x1010);
    assert_eq!(l.key_offset(), 16);
    l.search_roots(0x1018);
    l.search_roots(0x1020);
    assert_eq!(l.key_offset(), 16);
}

#[test]
fn root_after_other_node_starts_traversal() {
    let mut l = linkey(16, 32);
    l.set_size(64).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.search_at(0x1010);
    assert_eq!(l.key_offset(), 16);
    l.search_at(0x8000);
    l.search_at(0x1018);
    assert_eq!(l.key_offset(), 24);
}

#[test]
fn explicit_new_traversal_rearms_key_offset() {
    let mut l = linkey(16, 32);
    l.set_size(64).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.search_at(0x1010);
    l.new_traversal();
    l.search_at(0x1018);
    assert_eq!(l.key_offset(), 24);
}

/// Parent P at 0x1000 pointing (offset 8) at child 0x2000, keyO learned as 8.
fn with_child(key_offset: u32) -> (Linkey, SimHeap) {
    let mut l = list_prefetcher();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    l.search_at(0x1000 + u64::from(key_offset));
    assert_eq!(l.key_offset(), key_offset);
    (l, heap)
}

#[test]
fn cam_matches_address_minus_key_offset() {
    let (mut l, _) = with_child(8);
    let child = l.find(0x2000).unwrap();
    assert_eq!(l.cam_table(0x2008), Some(child));
    assert_eq!(l.cam_table(0x2000), None);
    // break root adjacency so the next root access is a fresh lookup
    assert_eq!(l.search_at(0x2008), Some(child));
}

#[test]
fn cam_skips_roots() {
    let (l, _) = with_child(0);
    assert_eq!(l.cam_table(0x1000), None);
}

#[test]
fn root_wins_over_cam() {
    // root node of 64 bytes at 0x1000; a non-root entry whose base is 0x1010
    let mut l = linkey(16, 32);
    l.set_size(64).unwrap();
    l.add_offset(8).unwrap();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x1010).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    let inner = l.find(0x1010).unwrap();
    assert_eq!(l.cam_table(0x1010), Some(inner));
    assert_eq!(l.search_at(0x1010), l.roots()[0]);
}

#[test]
fn miss_leaves_lru_bits_alone() {
    let (mut l, _) = with_child(0);
    let before: Vec<_> = l.at_entries().iter().map(|e| e.used_lru).collect();
    assert_eq!(l.search_at(0x7777_0000), None);
    let after: Vec<_> = l.at_entries().iter().map(|e| e.used_lru).collect();
    assert_eq!(before, after);
}

#[test]
fn hit_marks_entry_and_outgoing_edges_only() {
    // chain root -> a -> b
    let mut l = list_prefetcher();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    heap.write64(addr(0x2008), 0x3000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    l.build_table(block(0x2000), &heap);
    let a = l.find(0x2000).unwrap();
    let root = l.roots()[0].unwrap();
    l.search_at(0x8000);
    l.search_at(0x2000);
    let edge_out = l.at_entries()[a as usize].children[0].cat_index;
    let edge_in = l.at_entries()[root as usize].children[0].cat_index;
    assert!(l.at_entries()[a as usize].used_lru);
    assert!(l.cat_entries()[edge_out as usize].used_lru);
    assert!(!l.cat_entries()[edge_in as usize].used_lru);
    assert!(!l.at_entries()[root as usize].used_lru);
}

#[test]
fn used_bits_clear_once_all_set() {
    // two-entry AT: root plus one child
    let mut l = Linkey::new(LinkeyConfig::new(2, 2)).unwrap();
    l.set_size(16).unwrap();
    l.add_offset(8).unwrap();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    l.search_at(0x1000);
    assert_eq!(l.at_entries().iter().filter(|e| e.used_lru).count(), 1);
    l.search_at(0x2000);
    assert_eq!(l.at_entries().iter().filter(|e| e.used_lru).count(), 0);
    l.check_integrity().unwrap();
}

#[test]
fn build_links_parent_to_child() {
    let mut l = list_prefetcher();
    let mut heap = SimHeap::new();
    l.set_root(0, 0x1000).unwrap();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    l.build_table(block(0x1000), &heap);
    let parent = l.roots()[0].unwrap();
    let child = l.find(0x2000).expect("child inserted");
    let slot = l.at_entries()[parent as usize].children[0];
    assert!(slot.valid);
    let edge = l.cat_entries()[slot.cat_index as usize];
    assert_eq!((edge.parent, edge.child, edge.offset_index), (parent, child, 0));
    assert!(edge.just_built && l.at_entries()[child as usize].just_built);
    l.check_integrity().unwrap();
}

#[test]
fn null_pointer_is_not_inserted() {
    let mut l = list_prefetcher();
    let heap = SimHeap::new();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    assert_eq!(l.at_entries().iter().filter(|e| e.valid).count(), 1);
    assert!(l.cat_entries().iter().all(|e| !e.valid));
}

#[test]
fn overwritten_pointer_relinks() {
    let mut l = list_prefetcher();
    let mut heap = SimHeap::new();
    l.set_root(0, 0x1000).unwrap();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    l.build_table(block(0x1000), &heap);
    let old_edge = l.at_entries()[l.roots()[0].unwrap() as usize].children[0].cat_index;

    heap.write64(addr(0x1008), 0x3000).unwrap();
    l.build_table(block(0x1000), &heap);
    let parent = l.roots()[0].unwrap();
    let slot = l.at_entries()[parent as usize].children[0];
    let edge = l.cat_entries()[slot.cat_index as usize];
    assert_eq!(l.at_entries()[edge.child as usize].base, 0x3000);
    assert_eq!(l.cat_entries().iter().filter(|e| e.valid).count(), 1);
    assert_eq!(l.stats().invalidations, 1);
    // the stale edge slot was freed and immediately reused
    assert_eq!(slot.cat_index, old_edge);

    // rebuilding an unchanged pointer is not a pointer-change invalidation
    l.build_table(block(0x1000), &heap);
    assert_eq!(l.stats().invalidations, 1);
    l.check_integrity().unwrap();
}

#[test]
fn victim_selection() {
    let mut l = Linkey::new(LinkeyConfig::new(4, 4)).unwrap();
    l.set_size(16).unwrap();
    l.add_offset(8).unwrap();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    heap.write64(addr(0x2008), 0x3000).unwrap();
    heap.write64(addr(0x3008), 0x4000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    for b in [0x1000, 0x2000, 0x3000] {
        l.build_table(block(b), &heap);
    }
    // everything just built: nothing evictable
    assert_eq!(l.pick_eviction_victim(Table::Address, None), None);
    assert_eq!(l.pick_eviction_victim(Table::ChildAssociation, None), None);

    l.new_traversal();
    let root = l.roots()[0].unwrap();
    let candidates: Vec<u32> = (0..4).filter(|&i| i != root).collect();
    assert_eq!(l.pick_eviction_victim(Table::Address, None), Some(candidates[0]));
    assert_eq!(
        l.pick_eviction_victim(Table::Address, Some(candidates[0])),
        Some(candidates[1])
    );
    assert_eq!(l.pick_eviction_victim(Table::ChildAssociation, None), Some(0));
}

#[test]
fn roots_are_never_victims() {
    let mut l = Linkey::new(LinkeyConfig::new(2, 2)).unwrap();
    l.set_size(16).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.set_root(1, 0x2000).unwrap();
    assert_eq!(l.pick_eviction_victim(Table::Address, None), None);
}

#[test]
fn full_tables_skip_insertion() {
    let mut l = Linkey::new(LinkeyConfig::new(2, 2)).unwrap();
    l.set_size(16).unwrap();
    l.add_offset(8).unwrap();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    heap.write64(addr(0x2008), 0x3000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    // AT full (root + just-built child) and nothing evictable
    l.build_table(block(0x2000), &heap);
    assert_eq!(l.find(0x3000), None);
    l.check_integrity().unwrap();
}

/// Binary node (32 bytes, children at 16 and 24) with two children, each of
/// which has one child of its own.
fn small_tree() -> (Linkey, u32) {
    let mut l = linkey(16, 32);
    l.set_size(32).unwrap();
    l.add_offset(16).unwrap();
    l.add_offset(24).unwrap();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1010), 0x2000).unwrap();
    heap.write64(addr(0x1018), 0x3000).unwrap();
    heap.write64(addr(0x2010), 0x4000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    for b in [0x1000, 0x2000] {
        l.build_table(block(b), &heap);
    }
    let a = l.find(0x2000).unwrap();
    (l, a)
}

#[test]
fn invalidating_a_parent_drops_both_edges() {
    let (mut l, _) = small_tree();
    let root = l.roots()[0].unwrap();
    l.invalidate_at(root);
    assert!(l.cat_entries().iter().all(|c| !c.valid || c.parent != root));
    assert_eq!(l.cat_entries().iter().filter(|c| c.valid).count(), 1);
    assert_eq!(l.roots()[0], None);
    l.check_integrity().unwrap();
}

#[test]
fn invalidating_a_child_clears_the_parent_slot() {
    let (mut l, a) = small_tree();
    let leaf = l.find(0x4000).unwrap();
    l.invalidate_at(leaf);
    assert!(!l.at_entries()[a as usize].children[0].valid);
    assert!(l.cat_entries().iter().all(|c| !c.valid || (c.child != leaf && c.parent != leaf)));
    // double invalidation is a no-op
    l.invalidate_at(leaf);
    l.check_integrity().unwrap();
}

#[test]
fn bfq_takes_all_children_of_unknown_node() {
    let mut l = linkey(16, 32);
    l.set_size(32).unwrap();
    l.add_offset(16).unwrap();
    l.add_offset(24).unwrap();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x5010), 0x6000).unwrap();
    heap.write64(addr(0x5018), 0x7000).unwrap();
    l.bfq_ingest(block(0x5000), PrefetchMeta { object_offset: 0 }, &heap);
    assert_eq!(l.bfq().iter().collect::<Vec<_>>(), vec![0x6000, 0x7000]);
}

#[test]
fn bfq_skips_children_already_linked() {
    let mut l = linkey(16, 32);
    l.set_size(32).unwrap();
    l.add_offset(16).unwrap();
    l.add_offset(24).unwrap();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1010), 0x2000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    // the second pointer appears after the table was built
    heap.write64(addr(0x1018), 0x3000).unwrap();
    l.bfq_ingest(block(0x1000), PrefetchMeta { object_offset: 0 }, &heap);
    assert_eq!(l.bfq().iter().collect::<Vec<_>>(), vec![0x3000]);
}

#[test]
fn bfq_overflow_drops_oldest() {
    let mut l = linkey(16, 32);
    l.set_size(16).unwrap();
    l.add_offset(8).unwrap();
    let mut heap = SimHeap::new();
    for k in 0..9u64 {
        let node = 0x10000 + k * 0x100;
        heap.write64(addr(node + 8), 0x80000 + k * 0x100).unwrap();
        l.bfq_ingest(block(node), PrefetchMeta { object_offset: 0 }, &heap);
    }
    assert_eq!(l.bfq().len(), 8);
    assert_eq!(l.bfq().iter().next(), Some(0x80100));
    assert_eq!(l.stats().bfq_drops, 1);
    assert_eq!(l.stats().bfq_pushes, 9);
}

#[test]
fn chain_walk_covers_every_node_block() {
    let mut l = list_prefetcher();
    let mut heap = SimHeap::new();
    heap.write64(addr(0x1008), 0x2000).unwrap();
    heap.write64(addr(0x2008), 0x3000).unwrap();
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    l.build_table(block(0x2000), &heap);
    let reqs = l.handle_core_req(0x1000);
    let blocks: Vec<u64> = reqs.iter().map(|r| r.block.get()).collect();
    assert_eq!(blocks, vec![0x2000, 0x3000]);
    assert!(reqs.iter().all(|r| r.meta == Some(PrefetchMeta { object_offset: 0 })));
}

#[test]
fn table_miss_draws_from_bfq() {
    let mut l = list_prefetcher();
    l.bfq.push(0x9010);
    let reqs = l.handle_core_req(0x5000);
    assert_eq!(reqs.len(), 1);
    assert_eq!(reqs[0].block.get(), 0x9000);
    assert_eq!(reqs[0].meta, Some(PrefetchMeta { object_offset: 0x10 }));
    assert!(l.bfq().is_empty());
}

#[test]
fn node_spanning_blocks_requests_only_the_other_block() {
    let mut l = linkey(16, 32);
    l.set_size(128).unwrap();
    l.add_offset(64).unwrap();
    l.set_root(0, 0x1000).unwrap();
    let reqs = l.handle_core_req(0x1000);
    assert_eq!(reqs.len(), 1);
    assert_eq!(reqs[0].block.get(), 0x1040);
    assert_eq!(reqs[0].meta, Some(PrefetchMeta { object_offset: -64 }));
}

#[test]
fn output_is_capped_at_eight() {
    // a wide tree: root with 8 children, each in its own block
    let mut l = linkey(64, 64);
    l.set_size(64).unwrap();
    for k in 0..8 {
        l.add_offset(8 * k).unwrap();
    }
    let mut heap = SimHeap::new();
    for k in 0..8u64 {
        heap.write64(addr(0x1000 + 8 * k), 0x10000 + 0x1000 * k).unwrap();
    }
    l.set_root(0, 0x1000).unwrap();
    l.build_table(block(0x1000), &heap);
    for _ in 0..3 {
        l.bfq.push(0x90000);
    }
    let reqs = l.handle_core_req(0x1000);
    assert_eq!(reqs.len(), 8);
    let mut blocks: Vec<u64> = reqs.iter().map(|r| r.block.get()).collect();
    blocks.dedup();
    assert_eq!(blocks.len(), 8);
}
