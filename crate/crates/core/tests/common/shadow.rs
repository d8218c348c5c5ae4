//! Naive model of the prefetcher tables: plain vectors, linear scans, no
//! indexes or counters. Written straight from the replacement and search
//! rules so the real tables can be diffed against it step by step.

use std::collections::VecDeque;

use linkey::metrics::TableStats;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct At {
    pub valid: bool,
    pub used: bool,
    pub just_built: bool,
    pub base: u64,
    pub kids: [Option<usize>; 8],
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Cat {
    pub valid: bool,
    pub used: bool,
    pub just_built: bool,
    pub parent: usize,
    pub child: usize,
    pub oi: usize,
}

#[derive(Debug, Clone)]
pub struct Shadow {
    pub out_cap: usize,
    pub bfq_cap: usize,
    pub size: u32,
    pub offsets: Vec<u32>,
    pub key: u32,
    pub roots: [Option<usize>; 4],
    pub at: Vec<At>,
    pub cat: Vec<Cat>,
    pub bfq: VecDeque<u64>,
    pub last_root: Option<usize>,
    pub armed: bool,
    pub stats: TableStats,
}

fn norm(a: u64) -> u64 {
    a & 0xFFFF_FFFF_FFF8
}

fn line(a: u64) -> u64 {
    a & !63
}

impl Shadow {
    pub fn new(at: usize, cat: usize, bfq: usize, out: usize) -> Self {
        Shadow {
            out_cap: out,
            bfq_cap: bfq,
            size: 0,
            offsets: Vec::new(),
            key: 0,
            roots: [None; 4],
            at: vec![At::default(); at],
            cat: vec![Cat::default(); cat],
            bfq: VecDeque::new(),
            last_root: None,
            armed: false,
            stats: TableStats::default(),
        }
    }

    pub fn reset(&mut self) {
        let stats = self.stats;
        *self = Shadow::new(self.at.len(), self.cat.len(), self.bfq_cap, self.out_cap);
        self.stats = stats;
    }

    pub fn set_size(&mut self, s: u32) -> Result<(), ()> {
        if s == 0 || s > 4096 || self.offsets.iter().any(|&o| o + 8 > s) {
            return Err(());
        }
        self.size = s;
        if self.key >= s {
            self.key = 0;
        }
        Ok(())
    }

    pub fn add_offset(&mut self, o: u32) -> Result<(), ()> {
        if self.offsets.len() == 8 || self.size == 0 || o % 8 != 0 || o + 8 > self.size {
            return Err(());
        }
        self.offsets.push(o);
        Ok(())
    }

    pub fn clear_roots(&mut self) {
        self.roots = [None; 4];
    }

    fn is_root(&self, i: usize) -> bool {
        self.roots.contains(&Some(i))
    }

    fn find(&self, base: u64) -> Option<usize> {
        self.at.iter().position(|e| e.valid && e.base == base)
    }

    fn victim_at(&self, protect: Option<usize>) -> Option<usize> {
        (0..self.at.len()).find(|&i| {
            let e = &self.at[i];
            e.valid && !e.used && !e.just_built && Some(i) != protect && !self.is_root(i)
        })
    }

    fn victim_cat(&self) -> Option<usize> {
        self.cat.iter().position(|e| e.valid && !e.used && !e.just_built)
    }

    pub fn set_root(&mut self, slot: usize, addr: u64) -> Result<(), ()> {
        if slot >= 4 {
            return Err(());
        }
        let base = norm(addr);
        let idx = match self.find(base) {
            Some(i) => i,
            None => {
                let i = match self.at.iter().position(|e| !e.valid) {
                    Some(i) => i,
                    None => {
                        let v = self
                            .victim_at(None)
                            .or_else(|| (0..self.at.len()).find(|&i| !self.is_root(i)))
                            .ok_or(())?;
                        self.drop_at(v);
                        self.stats.evictions += 1;
                        v
                    }
                };
                self.at[i] = At { valid: true, base, ..At::default() };
                i
            }
        };
        self.roots[slot] = Some(idx);
        Ok(())
    }

    pub fn new_traversal(&mut self) {
        self.clear_just_built();
        self.armed = true;
    }

    fn clear_just_built(&mut self) {
        for e in &mut self.at {
            e.just_built = false;
        }
        for e in &mut self.cat {
            e.just_built = false;
        }
    }

    fn drop_cat(&mut self, c: usize, count: bool) {
        if !self.cat[c].valid {
            return;
        }
        if count {
            self.stats.invalidations += 1;
        }
        let e = self.cat[c];
        if self.at[e.parent].kids[e.oi] == Some(c) {
            self.at[e.parent].kids[e.oi] = None;
        }
        self.cat[c] = Cat::default();
    }

    fn drop_at(&mut self, i: usize) {
        if !self.at[i].valid {
            return;
        }
        for c in 0..self.cat.len() {
            if self.cat[c].valid && (self.cat[c].parent == i || self.cat[c].child == i) {
                self.drop_cat(c, true);
            }
        }
        self.at[i] = At::default();
        for r in &mut self.roots {
            if *r == Some(i) {
                *r = None;
            }
        }
        if self.last_root == Some(i) {
            self.last_root = None;
        }
    }

    fn search(&mut self, addr: u64) -> Option<usize> {
        let size = u64::from(self.size);
        let mut hit = None;
        for r in self.roots.into_iter().flatten() {
            let e = self.at[r];
            if e.valid && e.base <= addr && addr < e.base + size {
                hit = Some(r);
                break;
            }
        }
        if let Some(r) = hit {
            if self.armed || self.last_root != Some(r) {
                self.key = (addr - self.at[r].base) as u32;
                self.clear_just_built();
                self.armed = false;
            }
        }
        self.last_root = hit;
        if hit.is_some() {
            return hit;
        }
        let base = addr.checked_sub(u64::from(self.key))?;
        if base % 8 != 0 {
            return None;
        }
        (0..self.at.len()).find(|&i| self.at[i].valid && self.at[i].base == base && !self.is_root(i))
    }

    fn touch(&mut self, i: usize) {
        self.at[i].used = true;
        for c in self.at[i].kids.into_iter().flatten() {
            self.cat[c].used = true;
        }
        if self.at.iter().all(|e| e.used) {
            for e in &mut self.at {
                e.used = false;
            }
        }
        if self.cat.iter().all(|e| e.used) {
            for e in &mut self.cat {
                e.used = false;
            }
        }
    }

    pub fn build(&mut self, block: u64, word: impl Fn(u64) -> u64) {
        if self.size == 0 || self.offsets.is_empty() {
            return;
        }
        let size = u64::from(self.size);
        let parents: Vec<(usize, u64)> = (0..self.at.len())
            .filter(|&i| {
                let e = &self.at[i];
                e.valid && line(e.base) <= block && block <= line(e.base + size - 1)
            })
            .map(|i| (i, self.at[i].base))
            .collect();
        for (p, pbase) in parents {
            if !self.at[p].valid || self.at[p].base != pbase {
                continue;
            }
            for oi in 0..self.offsets.len() {
                let field = pbase + u64::from(self.offsets[oi]);
                if line(field) != block {
                    continue;
                }
                let child = norm(word(field));
                if let Some(c) = self.at[p].kids[oi] {
                    let changed = self.at[self.cat[c].child].base != child;
                    self.drop_cat(c, changed);
                }
                if child != 0 {
                    self.link(p, oi, child);
                }
            }
        }
    }

    fn link(&mut self, p: usize, oi: usize, child: u64) {
        let existing = self.find(child);
        let at_pick = match existing {
            Some(i) => Some((i, false)),
            None => match self.at.iter().position(|e| !e.valid) {
                Some(i) => Some((i, false)),
                None => self.victim_at(Some(p)).map(|i| (i, true)),
            },
        };
        let cat_pick = self.cat.iter().position(|e| !e.valid).or_else(|| self.victim_cat());
        let (Some((ci, evict)), Some(k)) = (at_pick, cat_pick) else {
            return;
        };
        if evict {
            self.drop_at(ci);
            self.stats.evictions += 1;
        }
        if self.cat[k].valid {
            self.drop_cat(k, true);
            self.stats.evictions += 1;
        }
        if existing.is_some() {
            self.at[ci].just_built = true;
        } else {
            self.at[ci] = At { valid: true, just_built: true, base: child, ..At::default() };
            self.stats.at_insertions += 1;
        }
        self.cat[k] = Cat { valid: true, used: false, just_built: true, parent: p, child: ci, oi };
        self.stats.cat_insertions += 1;
        self.at[p].kids[oi] = Some(k);
    }

    pub fn ingest(&mut self, block: u64, object_offset: i64, word: impl Fn(u64) -> u64) {
        if self.size == 0 {
            return;
        }
        let node = norm(block.wrapping_add_signed(object_offset));
        let entry = self.find(node);
        for oi in 0..self.offsets.len() {
            let field = node + u64::from(self.offsets[oi]);
            if line(field) != block {
                continue;
            }
            let child = norm(word(field));
            if child == 0 || entry.is_some_and(|i| self.at[i].kids[oi].is_some()) {
                continue;
            }
            if self.bfq_cap == 0 || self.bfq.contains(&child) {
                continue;
            }
            if self.bfq.len() == self.bfq_cap {
                self.bfq.pop_front();
                self.stats.bfq_drops += 1;
            }
            self.bfq.push_back(child);
            self.stats.bfq_pushes += 1;
        }
    }

    /// Requests as `(block, node base - block)`.
    pub fn core_req(&mut self, addr: u64) -> Vec<(u64, i64)> {
        let mut out = Vec::new();
        if self.size == 0 {
            return out;
        }
        let core = line(addr);
        if let Some(hit) = self.search(addr) {
            self.touch(hit);
            let mut visited = vec![false; self.at.len()];
            let mut queue = VecDeque::from([hit]);
            while out.len() < self.out_cap {
                let Some(i) = queue.pop_front() else { break };
                if visited[i] {
                    continue;
                }
                visited[i] = true;
                self.object(self.at[i].base, core, &mut out);
                for c in self.at[i].kids[..self.offsets.len()].iter().flatten() {
                    queue.push_back(self.cat[*c].child);
                }
            }
        }
        while out.len() < self.out_cap {
            let Some(n) = self.bfq.pop_front() else { break };
            self.object(n, core, &mut out);
        }
        out
    }

    fn object(&self, base: u64, core: u64, out: &mut Vec<(u64, i64)>) {
        let mut addrs = vec![base + u64::from(self.key)];
        addrs.extend(self.offsets.iter().map(|&o| base + u64::from(o)));
        for a in addrs {
            let b = line(a);
            if out.len() >= self.out_cap {
                break;
            }
            if b != core && !out.iter().any(|r| r.0 == b) {
                out.push((b, base as i64 - b as i64));
            }
        }
    }
}
