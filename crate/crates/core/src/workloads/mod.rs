//! The fifteen pointer-based benchmarks.
//!
//! Every benchmark is split in three steps. [`Workload::generate`] draws all
//! random inputs (values, keys, probe streams, word lists, graph edges) from
//! the seed as plain data. [`Workload::build`] lays the structure out in a
//! [`SimHeap`] through its shuffled node pool, without touching the caches.
//! [`Workload::run`] executes the kernel against any [`Memory`]; with a
//! [`MemorySystem`] every node field read or write becomes a demand access.

mod array;
mod bintree;
mod graph;
mod list;
mod octree;
mod plan;
mod rbtree;
mod sampler;
mod splay;
mod trie;

use std::fmt;
use std::str::FromStr;

pub use array::{array_sweep, ArraySweep};
pub use plan::{OctNode, Plan};
pub use rbtree::{check_red_black, RbTree};
pub use sampler::{zipf_sample, KeyDistribution, KeySampler, Zipf, ZIPF_THETA};
pub use splay::SplayTree;
pub use trie::{letter_offset, REGISTERED_LETTERS};

use crate::error::{MemError, WorkloadError};
use crate::linkey::{LdsCommand, NodeLayout};
use crate::memsys::{MemorySystem, SimAddress, SimHeap};

/// Number of probes every lookup benchmark performs.
pub const PROBES: usize = 1000;

/// Share of keys (in percent) the dynamic benchmarks insert during the kernel.
pub const DYNAMIC_INSERT_PERCENT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Benchmark {
    Ll,
    LlReverse,
    Dll,
    BintreeDfs,
    BintreeBfs,
    BintreeProbeUni,
    BintreeProbeZipf,
    RbtreeUni,
    RbtreeZipf,
    SplayUni,
    SplayZipf,
    TrieUni,
    TrieZipf,
    Octree,
    GraphBfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Lookup,
    Traversal,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::Lookup => "lookup",
            Category::Traversal => "traversal",
        })
    }
}

impl Benchmark {
    pub const ALL: [Benchmark; 15] = [
        Benchmark::Ll,
        Benchmark::LlReverse,
        Benchmark::Dll,
        Benchmark::BintreeDfs,
        Benchmark::BintreeBfs,
        Benchmark::BintreeProbeUni,
        Benchmark::BintreeProbeZipf,
        Benchmark::RbtreeUni,
        Benchmark::RbtreeZipf,
        Benchmark::SplayUni,
        Benchmark::SplayZipf,
        Benchmark::TrieUni,
        Benchmark::TrieZipf,
        Benchmark::Octree,
        Benchmark::GraphBfs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Ll => "ll",
            Benchmark::LlReverse => "ll_reverse",
            Benchmark::Dll => "dll",
            Benchmark::BintreeDfs => "bintree_dfs",
            Benchmark::BintreeBfs => "bintree_bfs",
            Benchmark::BintreeProbeUni => "bintree_probe_uni",
            Benchmark::BintreeProbeZipf => "bintree_probe_zipf",
            Benchmark::RbtreeUni => "rbtree_uni",
            Benchmark::RbtreeZipf => "rbtree_zipf",
            Benchmark::SplayUni => "splay_uni",
            Benchmark::SplayZipf => "splay_zipf",
            Benchmark::TrieUni => "trie_uni",
            Benchmark::TrieZipf => "trie_zipf",
            Benchmark::Octree => "octree",
            Benchmark::GraphBfs => "graph_bfs",
        }
    }

    pub fn category(self) -> Category {
        use Benchmark::*;
        match self {
            Ll | LlReverse | Dll | BintreeDfs | BintreeBfs | Octree | GraphBfs => Category::Traversal,
            _ => Category::Lookup,
        }
    }

    /// Whether the kernel mutates the structure.
    pub fn is_dynamic(self) -> bool {
        use Benchmark::*;
        matches!(self, LlReverse | RbtreeUni | RbtreeZipf | SplayUni | SplayZipf)
    }

    /// Key distribution of a lookup benchmark.
    pub fn key_distribution(self) -> Option<KeyDistribution> {
        use Benchmark::*;
        match self {
            BintreeProbeUni | RbtreeUni | SplayUni | TrieUni => Some(KeyDistribution::Uniform),
            BintreeProbeZipf | RbtreeZipf | SplayZipf | TrieZipf => Some(KeyDistribution::Zipfian),
            _ => None,
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown benchmark `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Size {
    Small,
    Large,
    Huge,
}

impl Size {
    pub const ALL: [Size; 3] = [Size::Small, Size::Large, Size::Huge];

    pub fn name(self) -> &'static str {
        match self {
            Size::Small => "small",
            Size::Large => "large",
            Size::Huge => "huge",
        }
    }

    /// Approximate node count.
    pub fn nodes(self) -> usize {
        match self {
            Size::Small => 1_000,
            Size::Large => 10_000,
            Size::Huge => 100_000,
        }
    }

    /// Depth of the perfectly balanced binary tree: the largest full tree
    /// that stays close to the node target.
    pub fn tree_depth(self) -> u32 {
        match self {
            Size::Small => 10,
            Size::Large => 13,
            Size::Huge => 16,
        }
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Size::ALL
            .into_iter()
            .find(|z| z.name() == s)
            .ok_or_else(|| format!("unknown size `{s}`"))
    }
}

/// Word-granular memory as seen by a kernel.
pub trait Memory {
    fn load(&mut self, addr: u64) -> Result<u64, MemError>;

    fn store(&mut self, addr: u64, value: u64) -> Result<(), MemError>;

    fn alloc(&mut self, size: u32) -> Result<u64, MemError>;

    /// Tells the prefetcher about a (new) root. Plain memory ignores it.
    fn set_root(&mut self, _slot: usize, _addr: u64) -> Result<(), WorkloadError> {
        Ok(())
    }
}

impl Memory for SimHeap {
    fn load(&mut self, addr: u64) -> Result<u64, MemError> {
        self.read64(SimAddress::new(addr)?)
    }

    fn store(&mut self, addr: u64, value: u64) -> Result<(), MemError> {
        self.write64(SimAddress::new(addr)?, value)
    }

    fn alloc(&mut self, size: u32) -> Result<u64, MemError> {
        self.alloc_node(size).map(SimAddress::get)
    }
}

impl Memory for MemorySystem {
    fn load(&mut self, addr: u64) -> Result<u64, MemError> {
        MemorySystem::load(self, SimAddress::new(addr)?)
    }

    fn store(&mut self, addr: u64, value: u64) -> Result<(), MemError> {
        MemorySystem::store(self, SimAddress::new(addr)?, value)
    }

    fn alloc(&mut self, size: u32) -> Result<u64, MemError> {
        self.heap_mut().alloc_node(size).map(SimAddress::get)
    }

    fn set_root(&mut self, slot: usize, addr: u64) -> Result<(), WorkloadError> {
        self.configure(LdsCommand::SetRoot { slot, addr })?;
        Ok(())
    }
}

/// Order-sensitive checksum step shared by kernels and reference code.
pub fn mix(h: u64, v: u64) -> u64 {
    h.wrapping_mul(31).wrapping_add(v)
}

/// Value stored alongside `key` in the search trees.
pub fn value_of(key: u64) -> u64 {
    key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 16
}

/// Result of building a workload in the heap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    /// Root node addresses in slot order.
    pub roots: Vec<u64>,
    /// Node size and the child offsets handed to the prefetcher.
    pub layout: NodeLayout,
    pub node_count: usize,
}

impl Structure {
    /// The configuration sequence a program issues before its hot loop.
    pub fn lds_commands(&self) -> Vec<LdsCommand> {
        let mut cmds = vec![LdsCommand::Reset, LdsCommand::SetSize(self.layout.node_size())];
        cmds.extend(self.layout.child_offsets().iter().map(|&o| LdsCommand::AddOffset(o)));
        cmds.extend(
            self.roots
                .iter()
                .enumerate()
                .map(|(slot, &addr)| LdsCommand::SetRoot { slot, addr }),
        );
        cmds
    }
}

fn layout(node_size: u32, offsets: &[u32]) -> NodeLayout {
    let mut l = NodeLayout::default();
    l.set_size(node_size).expect("benchmark node sizes are valid");
    for &o in offsets {
        l.add_offset(o).expect("benchmark offsets are valid");
    }
    l
}

/// A benchmark instance: its identity plus every random input, generated
/// once from the seed.
#[derive(Debug, Clone)]
pub struct Workload {
    pub benchmark: Benchmark,
    pub size: Size,
    pub seed: u64,
    pub plan: Plan,
}

impl Workload {
    pub fn generate(benchmark: Benchmark, size: Size, seed: u64) -> Self {
        Workload {
            benchmark,
            size,
            seed,
            plan: Plan::generate(benchmark, size, seed),
        }
    }

    /// Bytes per node.
    pub fn node_size(&self) -> u32 {
        match self.benchmark {
            Benchmark::Ll | Benchmark::LlReverse => list::NODE_SIZE,
            Benchmark::Dll => list::DLL_NODE_SIZE,
            Benchmark::BintreeDfs
            | Benchmark::BintreeBfs
            | Benchmark::BintreeProbeUni
            | Benchmark::BintreeProbeZipf
            | Benchmark::SplayUni
            | Benchmark::SplayZipf => bintree::NODE_SIZE,
            Benchmark::RbtreeUni | Benchmark::RbtreeZipf => rbtree::NODE_SIZE,
            Benchmark::TrieUni | Benchmark::TrieZipf => trie::NODE_SIZE,
            Benchmark::Octree => octree::NODE_SIZE,
            Benchmark::GraphBfs => graph::NODE_SIZE,
        }
    }

    /// Nodes the build and the kernel allocate together.
    pub fn total_nodes(&self) -> usize {
        self.plan.total_nodes()
    }

    /// A heap whose shuffled pool holds exactly the nodes this workload needs.
    pub fn heap(&self) -> SimHeap {
        SimHeap::with_pool(self.seed ^ 0x5EED_0F_9001, self.total_nodes(), self.node_size())
    }

    /// Builds the structure directly in `heap`.
    pub fn build(&self, heap: &mut SimHeap) -> Result<Structure, WorkloadError> {
        let (roots, offsets, node_count): (Vec<u64>, Vec<u32>, usize) = match &self.plan {
            Plan::List { values, .. } => {
                let doubly = self.benchmark == Benchmark::Dll;
                let (head, tail) = list::build(heap, values, doubly)?;
                if doubly {
                    (vec![head, tail], list::DLL_OFFSETS.to_vec(), values.len())
                } else {
                    (vec![head], list::OFFSETS.to_vec(), values.len())
                }
            }
            Plan::Tree { depth, .. } => {
                let root = bintree::build(heap, *depth)?;
                (vec![root], bintree::OFFSETS.to_vec(), (1usize << depth) - 1)
            }
            Plan::Dynamic { initial, .. } => match self.benchmark {
                Benchmark::RbtreeUni | Benchmark::RbtreeZipf => {
                    let mut t = RbTree::default();
                    for &k in initial {
                        t.insert(heap, k, value_of(k))?;
                    }
                    (vec![t.root], rbtree::OFFSETS.to_vec(), initial.len())
                }
                _ => {
                    let mut t = SplayTree::default();
                    for &k in initial {
                        t.insert(heap, k, value_of(k))?;
                    }
                    (vec![t.root], bintree::OFFSETS.to_vec(), initial.len())
                }
            },
            Plan::Trie { words, .. } => {
                let (root, count) = trie::build(heap, words)?;
                (vec![root], trie::offsets(), count)
            }
            Plan::Octree { nodes } => {
                let root = octree::build(heap, nodes)?;
                (vec![root], octree::OFFSETS.to_vec(), nodes.len())
            }
            Plan::Graph { values, adjacency, start } => {
                let addrs = graph::build(heap, values, adjacency)?;
                (vec![addrs[*start as usize]], graph::OFFSETS.to_vec(), values.len())
            }
        };
        Ok(Structure {
            roots,
            layout: layout(self.node_size(), &offsets),
            node_count,
        })
    }

    /// Runs the kernel and returns its checksum.
    pub fn run<M: Memory>(&self, structure: &Structure, mem: &mut M) -> Result<u64, WorkloadError> {
        let root = structure.roots[0];
        match (&self.plan, self.benchmark) {
            (Plan::List { .. }, Benchmark::Ll) => Ok(list::sum_forward(mem, root)?),
            (Plan::List { inserted, .. }, Benchmark::LlReverse) => list::reverse_then_sum(mem, root, inserted),
            (Plan::List { .. }, _) => Ok(list::sum_both_ways(mem, root, structure.roots[1])?),
            (Plan::Tree { .. }, Benchmark::BintreeDfs) => Ok(bintree::dfs_sum(mem, root)?),
            (Plan::Tree { .. }, Benchmark::BintreeBfs) => Ok(bintree::bfs_sum(mem, root)?),
            (Plan::Tree { probes, .. }, _) => Ok(bintree::probe(mem, root, probes)?),
            (Plan::Dynamic { inserts, probes, .. }, Benchmark::RbtreeUni | Benchmark::RbtreeZipf) => {
                let mut t = RbTree { root };
                rbtree::probe_kernel(mem, &mut t, inserts, probes)
            }
            (Plan::Dynamic { inserts, probes, .. }, _) => {
                let mut t = SplayTree { root };
                splay::probe_kernel(mem, &mut t, inserts, probes)
            }
            (Plan::Trie { words, probes, .. }, _) => Ok(trie::probe(mem, root, words, probes)?),
            (Plan::Octree { .. }, _) => Ok(octree::w_cycle(mem, root)?),
            (Plan::Graph { .. }, _) => Ok(graph::bfs_sum(mem, root)?),
        }
    }
}

/// Inserts spread evenly over the probe stream: the ones due before probe `i`.
pub fn inserts_before(i: usize, inserts: usize, probes: usize) -> std::ops::Range<usize> {
    if probes == 0 {
        return 0..inserts;
    }
    (i * inserts / probes)..((i + 1) * inserts / probes)
}
