//! Top-down splay tree over the binary search tree node layout.

use super::bintree::{KEY, LEFT, RIGHT, VALUE};
use super::{inserts_before, mix, value_of, Memory};
use crate::error::{MemError, WorkloadError};

pub use super::bintree::NODE_SIZE;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SplayTree {
    pub root: u64,
}

// Side trees of the top-down splay. `None` stands for the header node, which
// lives on the stack and is not simulated memory.
struct Side {
    last: Option<u64>,
    header: u64,
}

impl Side {
    fn new() -> Self {
        Side { last: None, header: 0 }
    }

    fn attach<M: Memory>(&mut self, mem: &mut M, field: u64, node: u64) -> Result<(), MemError> {
        match self.last {
            None => self.header = node,
            Some(x) => mem.store(x + field, node)?,
        }
        Ok(())
    }
}

impl SplayTree {
    /// Splays the node with `key`, or the last node on its search path, to
    /// the root.
    pub fn splay<M: Memory>(&mut self, mem: &mut M, key: u64) -> Result<(), MemError> {
        let mut t = self.root;
        if t == 0 {
            return Ok(());
        }
        // `left` collects nodes smaller than key (linked by their right field)
        let mut left = Side::new();
        let mut right = Side::new();
        loop {
            let tk = mem.load(t + KEY)?;
            let (near, far) = if key < tk {
                (LEFT, RIGHT)
            } else if key > tk {
                (RIGHT, LEFT)
            } else {
                break;
            };
            let y = mem.load(t + near)?;
            if y == 0 {
                break;
            }
            let mut next = y;
            let yk = mem.load(y + KEY)?;
            if (near == LEFT && key < yk) || (near == RIGHT && key > yk) {
                // zig-zig: rotate y over t
                let inner = mem.load(y + far)?;
                mem.store(t + near, inner)?;
                mem.store(y + far, t)?;
                t = y;
                next = mem.load(t + near)?;
                if next == 0 {
                    break;
                }
            }
            if near == LEFT {
                right.attach(mem, LEFT, t)?;
                right.last = Some(t);
            } else {
                left.attach(mem, RIGHT, t)?;
                left.last = Some(t);
            }
            t = next;
        }
        let tl = mem.load(t + LEFT)?;
        let tr = mem.load(t + RIGHT)?;
        left.attach(mem, RIGHT, tl)?;
        right.attach(mem, LEFT, tr)?;
        mem.store(t + LEFT, left.header)?;
        mem.store(t + RIGHT, right.header)?;
        self.root = t;
        Ok(())
    }

    /// Splays and reports whether the root now holds `key`.
    pub fn lookup<M: Memory>(&mut self, mem: &mut M, key: u64) -> Result<Option<u64>, MemError> {
        self.splay(mem, key)?;
        if self.root != 0 && mem.load(self.root + KEY)? == key {
            Ok(Some(mem.load(self.root + VALUE)?))
        } else {
            Ok(None)
        }
    }

    /// Inserts `key` at the root unless present. Returns whether a node was
    /// added.
    pub fn insert<M: Memory>(&mut self, mem: &mut M, key: u64, value: u64) -> Result<bool, MemError> {
        if self.root != 0 {
            self.splay(mem, key)?;
            let t = self.root;
            let tk = mem.load(t + KEY)?;
            if tk == key {
                return Ok(false);
            }
            let n = mem.alloc(NODE_SIZE)?;
            mem.store(n + KEY, key)?;
            mem.store(n + VALUE, value)?;
            let (near, far) = if key < tk { (LEFT, RIGHT) } else { (RIGHT, LEFT) };
            let moved = mem.load(t + near)?;
            mem.store(n + near, moved)?;
            mem.store(n + far, t)?;
            mem.store(t + near, 0)?;
            self.root = n;
        } else {
            let n = mem.alloc(NODE_SIZE)?;
            mem.store(n + KEY, key)?;
            mem.store(n + VALUE, value)?;
            mem.store(n + LEFT, 0)?;
            mem.store(n + RIGHT, 0)?;
            self.root = n;
        }
        Ok(true)
    }
}

/// Probe stream with the reserved keys inserted evenly in between. Every
/// lookup restructures the tree; root changes are passed to the prefetcher.
pub fn probe_kernel<M: Memory>(
    mem: &mut M,
    tree: &mut SplayTree,
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
        let old = tree.root;
        let v = tree.lookup(mem, key)?.unwrap_or(0);
        if tree.root != old {
            mem.set_root(0, tree.root)?;
        }
        h = mix(h, v);
    }
    Ok(h)
}
