//! Red-black tree `{key, value, left, right, parent, color}` with parent
//! pointers and 0 as the shared black leaf.

use super::bintree::{find, KEY, LEFT, RIGHT, VALUE};
use super::{inserts_before, mix, value_of, Memory};
use crate::error::{MemError, WorkloadError};
use crate::memsys::SimHeap;

pub const NODE_SIZE: u32 = 48;
/// The parent pointer is deliberately not a child offset.
pub const OFFSETS: [u32; 2] = [LEFT as u32, RIGHT as u32];

const PARENT: u64 = 32;
const COLOR: u64 = 40;
const BLACK: u64 = 0;
const RED: u64 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RbTree {
    pub root: u64,
}

impl RbTree {
    fn color<M: Memory>(mem: &mut M, node: u64) -> Result<u64, MemError> {
        if node == 0 {
            Ok(BLACK)
        } else {
            mem.load(node + COLOR)
        }
    }

    // `dir` is the field the child moves out of: LEFT rotates right.
    fn rotate<M: Memory>(&mut self, mem: &mut M, x: u64, dir: u64) -> Result<(), MemError> {
        let other = if dir == LEFT { RIGHT } else { LEFT };
        let y = mem.load(x + other)?;
        let inner = mem.load(y + dir)?;
        mem.store(x + other, inner)?;
        if inner != 0 {
            mem.store(inner + PARENT, x)?;
        }
        let xp = mem.load(x + PARENT)?;
        mem.store(y + PARENT, xp)?;
        if xp == 0 {
            self.root = y;
        } else if mem.load(xp + LEFT)? == x {
            mem.store(xp + LEFT, y)?;
        } else {
            mem.store(xp + RIGHT, y)?;
        }
        mem.store(y + dir, x)?;
        mem.store(x + PARENT, y)
    }

    /// Inserts `key` unless present. Returns whether a node was added.
    pub fn insert<M: Memory>(&mut self, mem: &mut M, key: u64, value: u64) -> Result<bool, MemError> {
        let mut parent = 0;
        let mut went_left = false;
        let mut cur = self.root;
        while cur != 0 {
            parent = cur;
            let k = mem.load(cur + KEY)?;
            if key == k {
                return Ok(false);
            }
            went_left = key < k;
            cur = mem.load(cur + if went_left { LEFT } else { RIGHT })?;
        }
        let z = mem.alloc(NODE_SIZE)?;
        mem.store(z + KEY, key)?;
        mem.store(z + VALUE, value)?;
        mem.store(z + LEFT, 0)?;
        mem.store(z + RIGHT, 0)?;
        mem.store(z + PARENT, parent)?;
        mem.store(z + COLOR, RED)?;
        if parent == 0 {
            self.root = z;
        } else {
            mem.store(parent + if went_left { LEFT } else { RIGHT }, z)?;
        }
        self.fix_after_insert(mem, z)?;
        Ok(true)
    }

    fn fix_after_insert<M: Memory>(&mut self, mem: &mut M, mut z: u64) -> Result<(), MemError> {
        loop {
            let p = mem.load(z + PARENT)?;
            if Self::color(mem, p)? != RED {
                break;
            }
            // a red parent is never the root, so the grandparent exists
            let g = mem.load(p + PARENT)?;
            let (side, other) = if mem.load(g + LEFT)? == p {
                (LEFT, RIGHT)
            } else {
                (RIGHT, LEFT)
            };
            let uncle = mem.load(g + other)?;
            if Self::color(mem, uncle)? == RED {
                mem.store(p + COLOR, BLACK)?;
                mem.store(uncle + COLOR, BLACK)?;
                mem.store(g + COLOR, RED)?;
                z = g;
                continue;
            }
            let mut p = p;
            if mem.load(p + other)? == z {
                z = p;
                self.rotate(mem, z, side)?;
                p = mem.load(z + PARENT)?;
            }
            mem.store(p + COLOR, BLACK)?;
            mem.store(g + COLOR, RED)?;
            self.rotate(mem, g, other)?;
        }
        let root = self.root;
        if Self::color(mem, root)? != BLACK {
            mem.store(root + COLOR, BLACK)?;
        }
        Ok(())
    }
}

/// Probe stream with the reserved keys inserted evenly in between. The
/// prefetcher learns about every root change.
pub fn probe_kernel<M: Memory>(
    mem: &mut M,
    tree: &mut RbTree,
    inserts: &[u64],
    probes: &[u64],
) -> Result<u64, WorkloadError> {
    let mut h = 0;
    for (i, &key) in probes.iter().enumerate() {
        for &k in &inserts[inserts_before(i, inserts.len(), probes.len())] {
            let old = tree.root;
            tree.insert(mem, k, value_of(k))?;
            if tree.root != old {
                mem.set_root(0, tree.root)?;
            }
        }
        let node = find(mem, tree.root, key)?;
        let v = if node == 0 { 0 } else { mem.load(node + VALUE)? };
        h = mix(h, v);
    }
    Ok(h)
}

/// Validates search order, parent links, the red rule and equal black
/// heights. Returns the black height.
pub fn check_red_black(heap: &SimHeap, root: u64) -> Result<u32, String> {
    fn walk(heap: &SimHeap, node: u64, parent: u64, lo: u64, hi: u64) -> Result<u32, String> {
        if node == 0 {
            return Ok(1);
        }
        let key = heap.word(node + KEY);
        if key <= lo || key >= hi {
            return Err(format!("key {key} out of order"));
        }
        if heap.word(node + PARENT) != parent {
            return Err(format!("bad parent link at key {key}"));
        }
        let red = heap.word(node + COLOR) == RED;
        let (l, r) = (heap.word(node + LEFT), heap.word(node + RIGHT));
        if red && [l, r].iter().any(|&c| c != 0 && heap.word(c + COLOR) == RED) {
            return Err(format!("red node {key} has a red child"));
        }
        let bl = walk(heap, l, node, lo, key)?;
        let br = walk(heap, r, node, key, hi)?;
        if bl != br {
            return Err(format!("black heights differ below key {key}"));
        }
        Ok(bl + u32::from(!red))
    }
    if root != 0 && heap.word(root + COLOR) != BLACK {
        return Err("red root".into());
    }
    walk(heap, root, 0, 0, u64::MAX)
}
