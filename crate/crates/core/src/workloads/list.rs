//! Singly and doubly linked lists: `{value, next}` and `{value, next, prev}`.

use super::{mix, Memory};
use crate::error::{MemError, WorkloadError};
use crate::memsys::SimHeap;

pub const NODE_SIZE: u32 = 16;
pub const DLL_NODE_SIZE: u32 = 24;
pub const OFFSETS: [u32; 1] = [NEXT as u32];
pub const DLL_OFFSETS: [u32; 2] = [NEXT as u32, PREV as u32];

const VALUE: u64 = 0;
const NEXT: u64 = 8;
const PREV: u64 = 16;

/// Lays out `values` from head to tail; returns `(head, tail)`.
pub fn build(heap: &mut SimHeap, values: &[u64], doubly: bool) -> Result<(u64, u64), MemError> {
    let size = if doubly { DLL_NODE_SIZE } else { NODE_SIZE };
    let nodes = values
        .iter()
        .map(|_| heap.alloc(size))
        .collect::<Result<Vec<u64>, _>>()?;
    for (i, (&node, &v)) in nodes.iter().zip(values).enumerate() {
        heap.store(node + VALUE, v)?;
        heap.store(node + NEXT, nodes.get(i + 1).copied().unwrap_or(0))?;
        if doubly {
            let prev = if i == 0 { 0 } else { nodes[i - 1] };
            heap.store(node + PREV, prev)?;
        }
    }
    Ok((nodes.first().copied().unwrap_or(0), nodes.last().copied().unwrap_or(0)))
}

fn sum_via<M: Memory>(mem: &mut M, start: u64, link: u64, mut h: u64) -> Result<u64, MemError> {
    let mut cur = start;
    while cur != 0 {
        h = mix(h, mem.load(cur + VALUE)?);
        cur = mem.load(cur + link)?;
    }
    Ok(h)
}

pub fn sum_forward<M: Memory>(mem: &mut M, head: u64) -> Result<u64, MemError> {
    sum_via(mem, head, NEXT, 0)
}

/// Head to tail over `next`, then tail to head over `prev`.
pub fn sum_both_ways<M: Memory>(mem: &mut M, head: u64, tail: u64) -> Result<u64, MemError> {
    let h = sum_via(mem, head, NEXT, 0)?;
    sum_via(mem, tail, PREV, h)
}

/// Reverses the list in place, pushes `inserted` at the new head one node at
/// a time, then sums from the head. The prefetcher is told about each new head.
pub fn reverse_then_sum<M: Memory>(mem: &mut M, head: u64, inserted: &[u64]) -> Result<u64, WorkloadError> {
    let mut prev = 0;
    let mut cur = head;
    while cur != 0 {
        let next = mem.load(cur + NEXT)?;
        mem.store(cur + NEXT, prev)?;
        prev = cur;
        cur = next;
    }
    let mut head = prev;
    mem.set_root(0, head)?;
    for &v in inserted {
        let node = mem.alloc(NODE_SIZE)?;
        mem.store(node + VALUE, v)?;
        mem.store(node + NEXT, head)?;
        head = node;
        mem.set_root(0, head)?;
    }
    Ok(sum_forward(mem, head)?)
}
