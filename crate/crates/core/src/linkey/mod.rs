//! Table-based linked-data-structure prefetcher.
//!
//! Software describes a node (size, child-pointer offsets, up to four roots).
//! At runtime the prefetcher learns node addresses into an Address Table (AT)
//! and parent/child edges into a Child Association Table (CAT) from memory
//! responses. A demand access that hits the AT triggers a breadth-first walk
//! of the cached structure, emitting up to eight block requests; leftover
//! request slots are filled from a Backup Fetch Queue (BFQ) of pointers found
//! in prefetched blocks.
//!
//! Replacement is a pseudo-LRU with two protection bits per entry: `used_lru`
//! (set on a search hit, cleared table-wide once every entry has it) and
//! `just_built` (set on insertion, cleared when a new traversal starts). An
//! entry with either bit set, a root, or the parent currently being built is
//! never evicted; when nothing is evictable the insertion is skipped.

mod bfq;
mod hw;
mod layout;
mod tables;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub use bfq::{BackupFetchQueue, BfqPush};
pub use hw::{hardware_size_bits, hardware_size_bytes};
pub use layout::{LdsCommand, NodeLayout, MAX_CHILD_OFFSETS, MAX_NODE_SIZE, MAX_ROOTS};
pub use tables::{AtEntry, CatEntry, ChildSlot, Table};

use tables::{cache_line, stored_address};

use crate::error::ConfigError;
use crate::memsys::{AccessKind, BlockAddr, PrefetchMeta, PrefetchRequest, Prefetcher, SimAddress, SimHeap};
use crate::metrics::TableStats;

/// Sizing of the prefetcher structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LinkeyConfig {
    pub at_entries: usize,
    pub cat_entries: usize,
    pub bfq_entries: usize,
    pub output_capacity: usize,
}

impl LinkeyConfig {
    pub fn new(at_entries: usize, cat_entries: usize) -> Self {
        LinkeyConfig {
            at_entries,
            cat_entries,
            bfq_entries: 8,
            output_capacity: 8,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (what, value) in [("AT entries", self.at_entries), ("CAT entries", self.cat_entries)] {
            if value == 0 || !value.is_power_of_two() {
                return Err(ConfigError::NotPowerOfTwo { what, value });
            }
        }
        if self.at_entries > u32::MAX as usize || self.cat_entries > u32::MAX as usize {
            return Err(ConfigError::Layout("table too large".into()));
        }
        Ok(())
    }
}

impl Default for LinkeyConfig {
    fn default() -> Self {
        LinkeyConfig::new(256, 1024)
    }
}

/// Tracks whether a root access begins a new traversal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraversalState {
    /// AT index of the root the previous demand access resolved to, if any.
    pub last_root: Option<u32>,
    /// Set by an explicit `NewTraversal`: the next root hit updates `KeyO`.
    pub armed: bool,
}

/// The prefetcher state: configuration registers, AT, CAT, BFQ and the
/// request output buffer.
#[derive(Debug, Clone)]
pub struct Linkey {
    cfg: LinkeyConfig,
    layout: NodeLayout,
    roots: [Option<u32>; MAX_ROOTS],
    at: Vec<AtEntry>,
    cat: Vec<CatEntry>,
    bfq: BackupFetchQueue,
    traversal: TraversalState,
    // Valid AT entries by stored base. Serves both the CAM match and the
    // base-and-bound range scan.
    by_base: BTreeMap<u64, u32>,
    free_at: BTreeSet<u32>,
    free_cat: BTreeSet<u32>,
    at_used: usize,
    cat_used: usize,
    output: VecDeque<PrefetchRequest>,
    stats: TableStats,
    // BFS scratch space
    seen: Vec<u32>,
    epoch: u32,
}

impl Linkey {
    pub fn new(cfg: LinkeyConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        Ok(Linkey {
            cfg,
            layout: NodeLayout::default(),
            roots: [None; MAX_ROOTS],
            at: vec![AtEntry::default(); cfg.at_entries],
            cat: vec![CatEntry::default(); cfg.cat_entries],
            bfq: BackupFetchQueue::new(cfg.bfq_entries),
            traversal: TraversalState::default(),
            by_base: BTreeMap::new(),
            free_at: (0..cfg.at_entries as u32).collect(),
            free_cat: (0..cfg.cat_entries as u32).collect(),
            at_used: 0,
            cat_used: 0,
            output: VecDeque::with_capacity(cfg.output_capacity),
            stats: TableStats::default(),
            seen: vec![0; cfg.at_entries],
            epoch: 0,
        })
    }

    pub fn config(&self) -> &LinkeyConfig {
        &self.cfg
    }

    pub fn layout(&self) -> &NodeLayout {
        &self.layout
    }

    pub fn key_offset(&self) -> u32 {
        self.layout.key_offset()
    }

    pub fn roots(&self) -> [Option<u32>; MAX_ROOTS] {
        self.roots
    }

    pub fn at_entries(&self) -> &[AtEntry] {
        &self.at
    }

    pub fn cat_entries(&self) -> &[CatEntry] {
        &self.cat
    }

    pub fn bfq(&self) -> &BackupFetchQueue {
        &self.bfq
    }

    pub fn traversal(&self) -> TraversalState {
        self.traversal
    }

    pub fn stats(&self) -> TableStats {
        self.stats
    }

    /// Index of the valid AT entry storing `addr`, roots included.
    pub fn find(&self, addr: u64) -> Option<u32> {
        self.by_base.get(&stored_address(addr)).copied()
    }

    pub fn is_root(&self, idx: u32) -> bool {
        self.roots.contains(&Some(idx))
    }

    // ---------------------------------------------------------------------
    // configuration

    pub fn apply(&mut self, cmd: LdsCommand) -> Result<(), ConfigError> {
        match cmd {
            LdsCommand::Reset => {
                self.reset();
                Ok(())
            }
            LdsCommand::SetRoot { slot, addr } => self.set_root(slot, addr),
            LdsCommand::ClearRoots => {
                self.clear_roots();
                Ok(())
            }
            LdsCommand::AddOffset(o) => self.add_offset(o),
            LdsCommand::SetSize(s) => self.set_size(s),
            LdsCommand::NewTraversal => {
                self.new_traversal();
                Ok(())
            }
        }
    }

    pub fn reset(&mut self) {
        let stats = self.stats;
        *self = Linkey::new(self.cfg).expect("config was validated");
        self.stats = stats;
    }

    pub fn set_size(&mut self, size: u32) -> Result<(), ConfigError> {
        self.layout.set_size(size)
    }

    pub fn add_offset(&mut self, offset: u32) -> Result<(), ConfigError> {
        self.layout.add_offset(offset)
    }

    pub fn clear_roots(&mut self) {
        self.roots = [None; MAX_ROOTS];
    }

    /// Locates or allocates the AT entry for `addr` and pins it in root slot
    /// `slot`. Allocation prefers a free entry, then a regular eviction
    /// victim, then the lowest-index non-root entry regardless of its LRU bits.
    pub fn set_root(&mut self, slot: usize, addr: u64) -> Result<(), ConfigError> {
        if slot >= MAX_ROOTS {
            return Err(ConfigError::RootSlot(slot));
        }
        let base = stored_address(addr);
        let idx = match self.find(base) {
            Some(i) => i,
            None => {
                let idx = match self.free_at.first().copied() {
                    Some(i) => i,
                    None => {
                        let victim = self
                            .pick_eviction_victim(Table::Address, None)
                            .or_else(|| {
                                (0..self.at.len() as u32)
                                    .find(|&i| self.at[i as usize].valid && !self.is_root(i))
                            })
                            .ok_or(ConfigError::RootCapacity(addr))?;
                        self.invalidate_at(victim);
                        self.stats.evictions += 1;
                        victim
                    }
                };
                self.fill_at(idx, base, false);
                idx
            }
        };
        self.roots[slot] = Some(idx);
        Ok(())
    }

    /// Clears every `just_built` bit and arms a `KeyO` update on the next
    /// root hit.
    pub fn new_traversal(&mut self) {
        self.clear_just_built();
        self.traversal.armed = true;
    }

    fn clear_just_built(&mut self) {
        self.at.iter_mut().for_each(|e| e.just_built = false);
        self.cat.iter_mut().for_each(|e| e.just_built = false);
    }

    // ---------------------------------------------------------------------
    // search

    /// Base-and-bound check of `addr` against every valid root. A hit that
    /// starts a new traversal (the previous access did not resolve to this
    /// root, or a traversal was explicitly announced) sets `KeyO` to the
    /// offset of `addr` within the root and clears the `just_built` bits.
    pub fn search_roots(&mut self, addr: u64) -> Option<u32> {
        let size = u64::from(self.layout.node_size());
        let hit = self.roots.iter().flatten().copied().find(|&i| {
            let e = &self.at[i as usize];
            e.valid && e.base <= addr && addr < e.base + size
        });
        if let Some(i) = hit {
            if self.traversal.armed || self.traversal.last_root != Some(i) {
                let base = self.at[i as usize].base;
                self.layout.set_key_offset((addr - base) as u32);
                self.clear_just_built();
                self.traversal.armed = false;
            }
        }
        self.traversal.last_root = hit;
        hit
    }

    /// Exact match of `addr - KeyO` against the stored bases of valid
    /// non-root entries.
    pub fn cam_table(&self, addr: u64) -> Option<u32> {
        let base = addr.checked_sub(u64::from(self.layout.key_offset()))?;
        if base % 8 != 0 {
            return None;
        }
        self.by_base
            .get(&base)
            .copied()
            .filter(|&i| !self.is_root(i))
    }

    /// Roots first, CAM second. A hit marks the entry and its outgoing CAT
    /// edges as recently used.
    pub fn search_at(&mut self, addr: u64) -> Option<u32> {
        let hit = self.search_roots(addr).or_else(|| self.cam_table(addr))?;
        self.mark_used(hit);
        Some(hit)
    }

    fn mark_used(&mut self, idx: u32) {
        let entry = &mut self.at[idx as usize];
        if !entry.used_lru {
            entry.used_lru = true;
            self.at_used += 1;
        }
        let slots = entry.children;
        for slot in slots.iter().filter(|s| s.valid) {
            let c = &mut self.cat[slot.cat_index as usize];
            if !c.used_lru {
                c.used_lru = true;
                self.cat_used += 1;
            }
        }
        if self.at_used == self.at.len() {
            self.at.iter_mut().for_each(|e| e.used_lru = false);
            self.at_used = 0;
        }
        if self.cat_used == self.cat.len() {
            self.cat.iter_mut().for_each(|e| e.used_lru = false);
            self.cat_used = 0;
        }
    }

    // ---------------------------------------------------------------------
    // eviction and invalidation

    /// Lowest-index valid entry with neither protection bit set that is not a
    /// root (AT only) and not `protected`.
    pub fn pick_eviction_victim(&self, table: Table, protected: Option<u32>) -> Option<u32> {
        match table {
            Table::Address => self.at.iter().enumerate().find_map(|(i, e)| {
                let i = i as u32;
                (e.valid
                    && !e.used_lru
                    && !e.just_built
                    && Some(i) != protected
                    && !self.is_root(i))
                .then_some(i)
            }),
            Table::ChildAssociation => self.cat.iter().enumerate().find_map(|(i, e)| {
                let i = i as u32;
                (e.valid && !e.used_lru && !e.just_built && Some(i) != protected).then_some(i)
            }),
        }
    }

    /// Unlinks a CAT entry from its parent slot and clears it. No-op if the
    /// entry is already invalid.
    pub fn invalidate_cat(&mut self, idx: u32) {
        self.drop_cat(idx, true);
    }

    // `count` is false only when the build step re-links an unchanged pointer.
    fn drop_cat(&mut self, idx: u32, count: bool) {
        let entry = self.cat[idx as usize];
        if !entry.valid {
            return;
        }
        if count {
            self.stats.invalidations += 1;
        }
        let slot = &mut self.at[entry.parent as usize].children[entry.offset_index as usize];
        if slot.valid && slot.cat_index == idx {
            *slot = ChildSlot::default();
        }
        if entry.used_lru {
            self.cat_used -= 1;
        }
        self.cat[idx as usize] = CatEntry::default();
        self.free_cat.insert(idx);
    }

    /// Invalidates every CAT entry naming this AT entry as parent or child,
    /// then the entry itself. No-op if already invalid.
    pub fn invalidate_at(&mut self, idx: u32) {
        let entry = self.at[idx as usize];
        if !entry.valid {
            return;
        }
        for c in 0..self.cat.len() as u32 {
            let e = &self.cat[c as usize];
            if e.valid && (e.parent == idx || e.child == idx) {
                self.invalidate_cat(c);
            }
        }
        if entry.used_lru {
            self.at_used -= 1;
        }
        self.by_base.remove(&entry.base);
        self.at[idx as usize] = AtEntry::default();
        self.free_at.insert(idx);
        for r in self.roots.iter_mut() {
            if *r == Some(idx) {
                *r = None;
            }
        }
        if self.traversal.last_root == Some(idx) {
            self.traversal.last_root = None;
        }
    }

    fn fill_at(&mut self, idx: u32, base: u64, just_built: bool) {
        debug_assert!(!self.at[idx as usize].valid);
        self.at[idx as usize] = AtEntry {
            valid: true,
            used_lru: false,
            just_built,
            base,
            children: Default::default(),
        };
        self.free_at.remove(&idx);
        self.by_base.insert(base, idx);
    }

    // ---------------------------------------------------------------------
    // table building

    /// Learns child pointers from a block that was just returned from memory
    /// (demand load, prefetch fill) or written by a store.
    pub fn build_table(&mut self, block: BlockAddr, heap: &SimHeap) {
        let size = u64::from(self.layout.node_size());
        if size == 0 || self.layout.child_offsets().is_empty() {
            return;
        }
        let block = block.get();
        // line(base) <= block <= line(base + size - 1)
        let lo = (block + 1).saturating_sub(size);
        let hi = block + 63;
        let mut parents: Vec<(u32, u64)> = self
            .by_base
            .range(lo..=hi)
            .map(|(&base, &idx)| (idx, base))
            .collect();
        parents.sort_unstable();

        for (pidx, pbase) in parents {
            let p = &self.at[pidx as usize];
            if !p.valid || p.base != pbase {
                continue;
            }
            for oi in 0..self.layout.child_offsets().len() {
                let field = pbase + u64::from(self.layout.child_offsets()[oi]);
                if cache_line(field) != block {
                    continue;
                }
                let child = stored_address(heap.word(field));
                let slot = self.at[pidx as usize].children[oi];
                if slot.valid {
                    let old = self.cat[slot.cat_index as usize].child;
                    let changed = self.at[old as usize].base != child;
                    self.drop_cat(slot.cat_index, changed);
                }
                if child != 0 {
                    self.link(pidx, oi, child);
                }
            }
        }
    }

    fn link(&mut self, parent: u32, offset_index: usize, child: u64) {
        let existing = self.find(child);
        let at_slot = match existing {
            Some(i) => Some((i, false)),
            None => match self.free_at.first() {
                Some(&i) => Some((i, false)),
                None => self
                    .pick_eviction_victim(Table::Address, Some(parent))
                    .map(|i| (i, true)),
            },
        };
        let cat_slot = match self.free_cat.first() {
            Some(&i) => Some((i, false)),
            None => self
                .pick_eviction_victim(Table::ChildAssociation, None)
                .map(|i| (i, true)),
        };
        let (Some((child_idx, evict_at)), Some((cat_idx, _))) = (at_slot, cat_slot) else {
            return;
        };

        if evict_at {
            self.invalidate_at(child_idx);
            self.stats.evictions += 1;
        }
        if self.cat[cat_idx as usize].valid {
            self.invalidate_cat(cat_idx);
            self.stats.evictions += 1;
        }
        match existing {
            Some(i) => self.at[i as usize].just_built = true,
            None => {
                self.fill_at(child_idx, child, true);
                self.stats.at_insertions += 1;
            }
        }
        self.cat[cat_idx as usize] = CatEntry {
            valid: true,
            used_lru: false,
            just_built: true,
            parent,
            child: child_idx,
            offset_index: offset_index as u8,
        };
        self.free_cat.remove(&cat_idx);
        self.stats.cat_insertions += 1;
        self.at[parent as usize].children[offset_index] = ChildSlot {
            valid: true,
            cat_index: cat_idx,
        };
    }

    // ---------------------------------------------------------------------
    // backup fetch queue

    /// Pushes the non-NULL child pointers of the node a prefetch was issued
    /// for, if they lie in the returned block and the tables do not already
    /// link them: all of them when the node is not in the AT, otherwise only
    /// those whose child slot is invalid.
    pub fn bfq_ingest(&mut self, block: BlockAddr, meta: PrefetchMeta, heap: &SimHeap) {
        if !self.layout.is_configured() {
            return;
        }
        let node = stored_address(meta.node_base(block));
        let entry = self.find(node);
        for (oi, &o) in self.layout.child_offsets().iter().enumerate() {
            let field = node + u64::from(o);
            if cache_line(field) != block.get() {
                continue;
            }
            let child = stored_address(heap.word(field));
            if child == 0 {
                continue;
            }
            let linked = entry.is_some_and(|i| self.at[i as usize].children[oi].valid);
            if linked {
                continue;
            }
            match self.bfq.push(child) {
                BfqPush::Pushed => self.stats.bfq_pushes += 1,
                BfqPush::Displaced(_) => {
                    self.stats.bfq_pushes += 1;
                    self.stats.bfq_drops += 1;
                }
                BfqPush::Duplicate => {}
            }
        }
    }

    // ---------------------------------------------------------------------
    // request issuing

    /// Produces the request buffer for one core request: a breadth-first walk
    /// of the tables from the hit entry, then nodes popped from the BFQ, until
    /// the buffer holds `output_capacity` distinct blocks. The core's own block
    /// is never requested.
    pub fn handle_core_req(&mut self, addr: u64) -> Vec<PrefetchRequest> {
        let mut out = Vec::with_capacity(self.cfg.output_capacity);
        if !self.layout.is_configured() {
            return out;
        }
        let core_block = cache_line(addr);
        if let Some(hit) = self.search_at(addr) {
            self.issue_table_fetches(hit, core_block, &mut out);
        }
        while out.len() < self.cfg.output_capacity {
            let Some(node) = self.bfq.pop() else { break };
            self.prefetch_object(node, core_block, &mut out);
        }
        out
    }

    fn issue_table_fetches(&mut self, start: u32, core_block: u64, out: &mut Vec<PrefetchRequest>) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let mut queue = VecDeque::from([start]);
        while out.len() < self.cfg.output_capacity {
            let Some(i) = queue.pop_front() else { break };
            if self.seen[i as usize] == self.epoch {
                continue;
            }
            self.seen[i as usize] = self.epoch;
            let entry = self.at[i as usize];
            self.prefetch_object(entry.base, core_block, out);
            let n = self.layout.child_offsets().len();
            for slot in entry.children[..n].iter().filter(|s| s.valid) {
                queue.push_back(self.cat[slot.cat_index as usize].child);
            }
        }
    }

    fn prefetch_object(&self, base: u64, core_block: u64, out: &mut Vec<PrefetchRequest>) {
        self.issue_request(base + u64::from(self.layout.key_offset()), base, core_block, out);
        for &o in self.layout.child_offsets() {
            if out.len() >= self.cfg.output_capacity {
                break;
            }
            self.issue_request(base + u64::from(o), base, core_block, out);
        }
    }

    fn issue_request(&self, addr: u64, object: u64, core_block: u64, out: &mut Vec<PrefetchRequest>) {
        let block = cache_line(addr);
        if block == core_block
            || out.len() >= self.cfg.output_capacity
            || out.iter().any(|r| r.block.get() == block)
        {
            return;
        }
        out.push(PrefetchRequest {
            block: BlockAddr::containing(block),
            meta: Some(PrefetchMeta {
                object_offset: object as i64 - block as i64,
            }),
        });
    }

    // ---------------------------------------------------------------------

    /// Checks AT/CAT referential integrity, address uniqueness and the
    /// bookkeeping indexes. Returns a description of the first violation.
    pub fn check_integrity(&self) -> Result<(), String> {
        for (ci, c) in self.cat.iter().enumerate().filter(|(_, c)| c.valid) {
            let p = &self.at[c.parent as usize];
            if !p.valid || !self.at[c.child as usize].valid {
                return Err(format!("CAT {ci} references an invalid AT entry"));
            }
            let slot = p.children[c.offset_index as usize];
            if !slot.valid || slot.cat_index as usize != ci {
                return Err(format!("CAT {ci} is not linked from its parent slot"));
            }
        }
        let mut seen = BTreeSet::new();
        for (ai, a) in self.at.iter().enumerate().filter(|(_, a)| a.valid) {
            if !seen.insert(a.base) {
                return Err(format!("duplicate base {:#x}", a.base));
            }
            if self.by_base.get(&a.base) != Some(&(ai as u32)) {
                return Err(format!("AT {ai} missing from the base index"));
            }
            for (oi, s) in a.children.iter().enumerate().filter(|(_, s)| s.valid) {
                let c = &self.cat[s.cat_index as usize];
                if !c.valid || c.parent as usize != ai || c.offset_index as usize != oi {
                    return Err(format!("AT {ai} slot {oi} points at a stale CAT entry"));
                }
            }
        }
        if self.by_base.len() != seen.len() {
            return Err("base index holds invalid entries".into());
        }
        for r in self.roots.iter().flatten() {
            if !self.at[*r as usize].valid {
                return Err(format!("root slot points at invalid AT {r}"));
            }
        }
        if self.at_used != self.at.iter().filter(|e| e.used_lru).count()
            || self.cat_used != self.cat.iter().filter(|e| e.used_lru).count()
        {
            return Err("used-bit counters out of sync".into());
        }
        Ok(())
    }
}

impl Prefetcher for Linkey {
    fn name(&self) -> &'static str {
        "linkey"
    }

    fn on_demand(&mut self, addr: SimAddress, _kind: AccessKind) {
        self.output.clear();
        let reqs = self.handle_core_req(addr.get());
        self.output.extend(reqs);
    }

    fn on_response(&mut self, block: BlockAddr, meta: Option<PrefetchMeta>, heap: &SimHeap) {
        self.build_table(block, heap);
        if let Some(meta) = meta {
            self.bfq_ingest(block, meta, heap);
        }
    }

    fn pop_request(&mut self) -> Option<PrefetchRequest> {
        self.output.pop_front()
    }

    fn configure(&mut self, cmd: LdsCommand) -> Result<(), ConfigError> {
        self.apply(cmd)
    }

    fn table_stats(&self) -> TableStats {
        self.stats
    }
}

#[cfg(test)]
mod tests;
