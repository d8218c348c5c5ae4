//! Octree `{value, children[8]}` and its W-cycle traversal.

use super::plan::OctNode;
use super::Memory;
use crate::error::MemError;
use crate::memsys::SimHeap;

pub const NODE_SIZE: u32 = 8 + 8 * 8;
pub const OFFSETS: [u32; 8] = [8, 16, 24, 32, 40, 48, 56, 64];

const VALUE: u64 = 0;

pub fn build(heap: &mut SimHeap, nodes: &[OctNode]) -> Result<u64, MemError> {
    let addrs = nodes
        .iter()
        .map(|_| heap.alloc(NODE_SIZE))
        .collect::<Result<Vec<u64>, _>>()?;
    for (n, &a) in nodes.iter().zip(&addrs) {
        heap.store(a + VALUE, n.value)?;
        if let Some(first) = n.first_child {
            for (k, &o) in OFFSETS.iter().enumerate() {
                heap.store(a + u64::from(o), addrs[first as usize + k])?;
            }
        }
    }
    Ok(addrs[0])
}

/// Node value plus every child subtree summed twice.
pub fn w_cycle<M: Memory>(mem: &mut M, node: u64) -> Result<u64, MemError> {
    if node == 0 {
        return Ok(0);
    }
    let mut sum = mem.load(node + VALUE)?;
    for _pass in 0..2 {
        for &o in &OFFSETS {
            let child = mem.load(node + u64::from(o))?;
            sum = sum.wrapping_add(w_cycle(mem, child)?);
        }
    }
    Ok(sum)
}
