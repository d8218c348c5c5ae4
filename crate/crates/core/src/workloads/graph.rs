//! Adjacency-list graph `{value, children[5]}`, non-NULL children first.

use std::collections::{HashSet, VecDeque};

use super::{mix, Memory};
use crate::error::MemError;
use crate::memsys::SimHeap;

pub const MAX_DEGREE: usize = 5;
pub const NODE_SIZE: u32 = 8 + 8 * MAX_DEGREE as u32;
pub const OFFSETS: [u32; MAX_DEGREE] = [8, 16, 24, 32, 40];

const VALUE: u64 = 0;

/// Returns the address of every node, by id.
pub fn build(heap: &mut SimHeap, values: &[u64], adjacency: &[Vec<u32>]) -> Result<Vec<u64>, MemError> {
    let addrs = values
        .iter()
        .map(|_| heap.alloc(NODE_SIZE))
        .collect::<Result<Vec<u64>, _>>()?;
    for ((&a, &v), adj) in addrs.iter().zip(values).zip(adjacency) {
        heap.store(a + VALUE, v)?;
        for (&o, &n) in OFFSETS.iter().zip(adj) {
            heap.store(a + u64::from(o), addrs[n as usize])?;
        }
    }
    Ok(addrs)
}

/// Breadth-first sum from `start`; each node is visited once.
pub fn bfs_sum<M: Memory>(mem: &mut M, start: u64) -> Result<u64, MemError> {
    let mut h = 0;
    let mut visited = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        h = mix(h, mem.load(node + VALUE)?);
        for &o in &OFFSETS {
            let child = mem.load(node + u64::from(o))?;
            if child == 0 {
                break;
            }
            if visited.insert(child) {
                queue.push_back(child);
            }
        }
    }
    Ok(h)
}
