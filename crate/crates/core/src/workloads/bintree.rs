//! Perfectly balanced binary search tree `{key, value, left, right}` over the
//! keys `1..2^depth`; node values are `value_of(key)`.

use std::collections::VecDeque;

use super::{mix, value_of, Memory};
use crate::error::MemError;
use crate::memsys::SimHeap;

pub const NODE_SIZE: u32 = 32;
pub const OFFSETS: [u32; 2] = [LEFT as u32, RIGHT as u32];

pub(super) const KEY: u64 = 0;
pub(super) const VALUE: u64 = 8;
pub(super) const LEFT: u64 = 16;
pub(super) const RIGHT: u64 = 24;

/// Allocates level by level and links each node to the midpoints of its
/// key halves. Returns the root.
pub fn build(heap: &mut SimHeap, depth: u32) -> Result<u64, MemError> {
    // (lo, hi, parent field to patch)
    let mut queue = VecDeque::from([(1u64, (1u64 << depth) - 1, None::<u64>)]);
    let mut root = 0;
    while let Some((lo, hi, link)) = queue.pop_front() {
        if lo > hi {
            continue;
        }
        let key = lo + (hi - lo) / 2;
        let node = heap.alloc(NODE_SIZE)?;
        heap.store(node + KEY, key)?;
        heap.store(node + VALUE, value_of(key))?;
        match link {
            Some(field) => heap.store(field, node)?,
            None => root = node,
        }
        if key > lo {
            queue.push_back((lo, key - 1, Some(node + LEFT)));
        }
        if key < hi {
            queue.push_back((key + 1, hi, Some(node + RIGHT)));
        }
    }
    Ok(root)
}

/// Recursive pre-order sum.
pub fn dfs_sum<M: Memory>(mem: &mut M, root: u64) -> Result<u64, MemError> {
    fn visit<M: Memory>(mem: &mut M, node: u64, h: &mut u64) -> Result<(), MemError> {
        if node == 0 {
            return Ok(());
        }
        *h = mix(*h, mem.load(node + VALUE)?);
        let left = mem.load(node + LEFT)?;
        visit(mem, left, h)?;
        let right = mem.load(node + RIGHT)?;
        visit(mem, right, h)
    }
    let mut h = 0;
    visit(mem, root, &mut h)?;
    Ok(h)
}

/// Queue-based level-order sum.
pub fn bfs_sum<M: Memory>(mem: &mut M, root: u64) -> Result<u64, MemError> {
    let mut h = 0;
    let mut queue = VecDeque::new();
    if root != 0 {
        queue.push_back(root);
    }
    while let Some(node) = queue.pop_front() {
        h = mix(h, mem.load(node + VALUE)?);
        for field in [LEFT, RIGHT] {
            let child = mem.load(node + field)?;
            if child != 0 {
                queue.push_back(child);
            }
        }
    }
    Ok(h)
}

/// Binary search; returns the node holding `key` or 0.
pub(super) fn find<M: Memory>(mem: &mut M, root: u64, key: u64) -> Result<u64, MemError> {
    let mut cur = root;
    while cur != 0 {
        let k = mem.load(cur + KEY)?;
        if key == k {
            return Ok(cur);
        }
        cur = mem.load(cur + if key < k { LEFT } else { RIGHT })?;
    }
    Ok(0)
}

/// One lookup per probe key; hashes the value found (0 for a miss).
pub fn probe<M: Memory>(mem: &mut M, root: u64, probes: &[u64]) -> Result<u64, MemError> {
    let mut h = 0;
    for &key in probes {
        let node = find(mem, root, key)?;
        let v = if node == 0 { 0 } else { mem.load(node + VALUE)? };
        h = mix(h, v);
    }
    Ok(h)
}
