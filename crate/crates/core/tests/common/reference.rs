//! Kernel results computed straight from the plan, without simulated memory.

use std::collections::{BTreeMap, HashSet, VecDeque};

use linkey::workloads::{OctNode, Plan, Workload};
use linkey::Benchmark;

fn mix(h: u64, v: u64) -> u64 {
    h.wrapping_mul(31).wrapping_add(v)
}

fn value_of(key: u64) -> u64 {
    key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 16
}

fn fold<'a>(h: u64, values: impl Iterator<Item = &'a u64>) -> u64 {
    values.fold(h, |h, &v| mix(h, v))
}

fn preorder(lo: u64, hi: u64, h: &mut u64) {
    if lo > hi {
        return;
    }
    let key = lo + (hi - lo) / 2;
    *h = mix(*h, value_of(key));
    if key > lo {
        preorder(lo, key - 1, h);
    }
    preorder(key + 1, hi, h);
}

fn level_order(max: u64) -> u64 {
    let mut h = 0;
    let mut q = VecDeque::from([(1u64, max)]);
    while let Some((lo, hi)) = q.pop_front() {
        let key = lo + (hi - lo) / 2;
        h = mix(h, value_of(key));
        if key > lo {
            q.push_back((lo, key - 1));
        }
        if key < hi {
            q.push_back((key + 1, hi));
        }
    }
    h
}

fn octree_sum(nodes: &[OctNode], i: usize) -> u64 {
    let n = &nodes[i];
    let mut s = n.value;
    if let Some(first) = n.first_child {
        for k in 0..8 {
            s = s.wrapping_add(octree_sum(nodes, first as usize + k).wrapping_mul(2));
        }
    }
    s
}

/// Expected kernel checksum of a workload.
pub fn checksum(w: &Workload) -> u64 {
    match &w.plan {
        Plan::List { values, inserted } => match w.benchmark {
            Benchmark::Ll => fold(0, values.iter()),
            Benchmark::LlReverse => fold(fold(0, inserted.iter().rev()), values.iter().rev()),
            _ => fold(fold(0, values.iter()), values.iter().rev()),
        },
        Plan::Tree { depth, probes } => {
            let max = (1u64 << depth) - 1;
            match w.benchmark {
                Benchmark::BintreeDfs => {
                    let mut h = 0;
                    preorder(1, max, &mut h);
                    h
                }
                Benchmark::BintreeBfs => level_order(max),
                _ => probes
                    .iter()
                    .fold(0, |h, &k| mix(h, if (1..=max).contains(&k) { value_of(k) } else { 0 })),
            }
        }
        Plan::Dynamic { initial, inserts, probes, .. } => {
            let mut tree: BTreeMap<u64, u64> = initial.iter().map(|&k| (k, value_of(k))).collect();
            let mut next = 0;
            let mut h = 0;
            for (i, &key) in probes.iter().enumerate() {
                let due = (i + 1) * inserts.len() / probes.len();
                while next < due {
                    tree.insert(inserts[next], value_of(inserts[next]));
                    next += 1;
                }
                h = mix(h, tree.get(&key).copied().unwrap_or(0));
            }
            h
        }
        Plan::Trie { words, probes, .. } => {
            let dict: HashSet<&str> = words.iter().map(String::as_str).collect();
            probes
                .iter()
                .fold(0, |h, &p| mix(h, u64::from(dict.contains(words[p].as_str()))))
        }
        Plan::Octree { nodes } => octree_sum(nodes, 0),
        Plan::Graph { values, adjacency, start } => {
            let mut h = 0;
            let mut seen = vec![false; values.len()];
            seen[*start as usize] = true;
            let mut q = VecDeque::from([*start as usize]);
            while let Some(n) = q.pop_front() {
                h = mix(h, values[n]);
                for &m in &adjacency[n] {
                    if !seen[m as usize] {
                        seen[m as usize] = true;
                        q.push_back(m as usize);
                    }
                }
            }
            h
        }
    }
}
