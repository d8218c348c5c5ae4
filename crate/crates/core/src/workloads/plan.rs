use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::MAX_DEGREE;
use super::sampler::KeySampler;
use super::{Benchmark, Size, DYNAMIC_INSERT_PERCENT, PROBES};

/// One octree node in generation order; a refined node owns the eight
/// consecutive ids starting at `first_child`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OctNode {
    pub value: u64,
    pub first_child: Option<u32>,
}

/// Plain-data inputs of a benchmark, independent of any memory model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Plan {
    /// List values in order from the head. `inserted` holds values pushed at
    /// the head during the kernel (reversing list only).
    List { values: Vec<u64>, inserted: Vec<u64> },
    /// Perfectly balanced search tree over keys `1..2^depth`.
    Tree { depth: u32, probes: Vec<u64> },
    /// Search tree built from `initial`, grown by `inserts` during the probes.
    Dynamic {
        domain_max: u64,
        initial: Vec<u64>,
        inserts: Vec<u64>,
        probes: Vec<u64>,
    },
    /// Dictionary in insertion order; probes index into it.
    Trie {
        words: Vec<String>,
        probes: Vec<usize>,
        node_count: usize,
    },
    Octree { nodes: Vec<OctNode> },
    /// Undirected graph; neighbor lists are in child-slot order.
    Graph {
        values: Vec<u64>,
        adjacency: Vec<Vec<u32>>,
        start: u32,
    },
}

// Relative frequency of a..z in English text, in hundredths of a percent.
const LETTER_WEIGHTS: [u32; 26] = [
    817, 149, 278, 425, 1270, 223, 202, 609, 697, 15, 77, 403, 241, 675, 751, 193, 10, 599, 633,
    906, 276, 98, 236, 15, 197, 7,
];

const MAX_WORD_LEN: usize = 10;
const MIN_WORD_LEN: usize = 3;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn values(r: &mut ChaCha8Rng, n: usize) -> Vec<u64> {
    (0..n).map(|_| r.gen_range(1..1u64 << 32)).collect()
}

/// Number of keys inserted during the kernel out of `n`.
pub fn reserved(n: usize) -> usize {
    n * DYNAMIC_INSERT_PERCENT / 100
}

impl Plan {
    pub fn generate(benchmark: Benchmark, size: Size, seed: u64) -> Plan {
        use Benchmark::*;
        let n = size.nodes();
        let mut r = rng(seed, 1);
        let probe_seed = seed.wrapping_mul(0x2545_F491_4F6C_DD1D) ^ 0xC0FFEE;
        match benchmark {
            Ll | Dll => Plan::List {
                values: values(&mut r, n),
                inserted: Vec::new(),
            },
            LlReverse => {
                let k = reserved(n);
                Plan::List {
                    values: values(&mut r, n - k),
                    inserted: values(&mut r, k),
                }
            }
            BintreeDfs | BintreeBfs => Plan::Tree {
                depth: size.tree_depth(),
                probes: Vec::new(),
            },
            BintreeProbeUni | BintreeProbeZipf => {
                let depth = size.tree_depth();
                let dist = benchmark.key_distribution().expect("lookup benchmark");
                let mut s = KeySampler::new(dist, (1 << depth) - 1, probe_seed);
                Plan::Tree {
                    depth,
                    probes: (0..PROBES).map(|_| s.sample()).collect(),
                }
            }
            RbtreeUni | RbtreeZipf | SplayUni | SplayZipf => {
                let d = (1..64).find(|&d| (1u64 << d) - 1 >= n as u64).expect("small n");
                let domain_max = (1u64 << d) - 1;
                let mut keys: Vec<u64> = index::sample(&mut r, domain_max as usize, n)
                    .into_iter()
                    .map(|k| k as u64 + 1)
                    .collect();
                keys.shuffle(&mut r);
                let inserts = keys.split_off(n - reserved(n));
                let dist = benchmark.key_distribution().expect("lookup benchmark");
                let mut s = KeySampler::new(dist, domain_max, probe_seed);
                Plan::Dynamic {
                    domain_max,
                    initial: keys,
                    inserts,
                    probes: (0..PROBES).map(|_| s.sample()).collect(),
                }
            }
            TrieUni | TrieZipf => {
                let (words, node_count) = dictionary(&mut r, n);
                let dist = benchmark.key_distribution().expect("lookup benchmark");
                let mut s = KeySampler::new(dist, words.len() as u64, probe_seed);
                Plan::Trie {
                    probes: (0..PROBES).map(|_| s.sample() as usize - 1).collect(),
                    words,
                    node_count,
                }
            }
            Octree => Plan::Octree {
                nodes: octree_shape(&mut r, n),
            },
            GraphBfs => {
                let adjacency = graph_edges(&mut r, n);
                Plan::Graph {
                    values: values(&mut r, n),
                    adjacency,
                    start: 0,
                }
            }
        }
    }

    /// Nodes allocated by the build and the kernel together.
    pub fn total_nodes(&self) -> usize {
        match self {
            Plan::List { values, inserted } => values.len() + inserted.len(),
            Plan::Tree { depth, .. } => (1 << depth) - 1,
            Plan::Dynamic { initial, inserts, .. } => initial.len() + inserts.len(),
            Plan::Trie { node_count, .. } => *node_count,
            Plan::Octree { nodes } => nodes.len(),
            Plan::Graph { values, .. } => values.len(),
        }
    }
}

/// Random lowercase words, letters drawn by English frequency, added until
/// the trie holding them has at least `target` nodes. Returns the distinct
/// words and the trie node count (root included).
fn dictionary(r: &mut ChaCha8Rng, target: usize) -> (Vec<String>, usize) {
    let total: u32 = LETTER_WEIGHTS.iter().sum();
    let mut prefixes: HashSet<String> = HashSet::new();
    let mut words = Vec::new();
    let mut seen = HashSet::new();
    while prefixes.len() + 1 < target {
        let len = r.gen_range(MIN_WORD_LEN..=MAX_WORD_LEN);
        let word: String = (0..len)
            .map(|_| {
                let mut x = r.gen_range(0..total);
                let mut c = 0;
                while x >= LETTER_WEIGHTS[c] {
                    x -= LETTER_WEIGHTS[c];
                    c += 1;
                }
                (b'a' + c as u8) as char
            })
            .collect();
        if !seen.insert(word.clone()) {
            continue;
        }
        for end in 1..=word.len() {
            prefixes.insert(word[..end].to_string());
        }
        words.push(word);
    }
    (words, prefixes.len() + 1)
}

/// Balanced random refinement: repeatedly split a random leaf of the
/// shallowest leaf level into eight children until `target` nodes exist.
fn octree_shape(r: &mut ChaCha8Rng, target: usize) -> Vec<OctNode> {
    let mut nodes = vec![OctNode {
        value: r.gen_range(1..1u64 << 32),
        first_child: None,
    }];
    let mut level: Vec<u32> = vec![0];
    let mut next: Vec<u32> = Vec::new();
    while nodes.len() < target {
        if level.is_empty() {
            std::mem::swap(&mut level, &mut next);
        }
        let pick = r.gen_range(0..level.len());
        let leaf = level.swap_remove(pick);
        let first = nodes.len() as u32;
        nodes[leaf as usize].first_child = Some(first);
        for k in 0..8 {
            nodes.push(OctNode {
                value: r.gen_range(1..1u64 << 32),
                first_child: None,
            });
            next.push(first + k);
        }
    }
    nodes
}

/// Connected undirected graph with every degree in `1..=MAX_DEGREE`: a random
/// spanning tree plus about `n / 2` extra edges, neighbor order shuffled.
fn graph_edges(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<u32>> {
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 1..n {
        let u = loop {
            let u = r.gen_range(0..v);
            if adj[u].len() < MAX_DEGREE {
                break u;
            }
        };
        adj[u].push(v as u32);
        adj[v].push(u as u32);
    }
    for _ in 0..n / 2 {
        let u = r.gen_range(0..n);
        let v = r.gen_range(0..n);
        if u == v
            || adj[u].len() >= MAX_DEGREE
            || adj[v].len() >= MAX_DEGREE
            || adj[u].contains(&(v as u32))
        {
            continue;
        }
        adj[u].push(v as u32);
        adj[v].push(u as u32);
    }
    for list in adj.iter_mut() {
        list.shuffle(r);
    }
    adj
}
