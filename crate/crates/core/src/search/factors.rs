//! Undirected parts for the first search phase.

use std::collections::BTreeMap;

use crate::canon::canonical_form;
use crate::graph::MixedGraph;
use crate::walks::undirected_distances_from;

/// Allowed degrees of each vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeRule {
    Exact(usize),
    AtMost(usize),
    AtLeast(usize),
}

impl DegreeRule {
    pub fn admits(self, d: usize) -> bool {
        match self {
            DegreeRule::Exact(x) => d == x,
            DegreeRule::AtMost(x) => d <= x,
            DegreeRule::AtLeast(x) => d >= x,
        }
    }

    /// Largest admissible degree when `cap` is the structural maximum.
    pub fn ceiling(self, cap: usize) -> usize {
        match self {
            DegreeRule::Exact(x) | DegreeRule::AtMost(x) => x.min(cap),
            DegreeRule::AtLeast(_) => cap,
        }
    }
}

fn partitions(n: usize, min_part: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for part in min_part..=n {
        if n - part == 0 || n - part >= part {
            cur.push(part);
            partitions(n - part, part, out, cur);
            cur.pop();
        }
    }
}

/// 2-regular graphs on `n` vertices with every cycle of length at least
/// `girth_floor`, one per multiset of cycle lengths. Cycles occupy
/// consecutive vertex ranges, shortest first.
pub fn enumerate_2factors(n: usize, girth_floor: usize) -> Vec<MixedGraph> {
    let mut parts = Vec::new();
    partitions(n, girth_floor.max(3), &mut parts, &mut Vec::new());
    parts
        .into_iter()
        .map(|lengths| {
            let mut edges = Vec::with_capacity(n);
            let mut start = 0;
            for len in lengths {
                for i in 0..len {
                    edges.push((start + i, start + (i + 1) % len));
                }
                start += len;
            }
            MixedGraph::new(n, edges, []).expect("cycles are simple")
        })
        .collect()
}

/// Undirected graphs on `n` vertices, up to isomorphism, whose degrees obey
/// `rule` and whose cycles all have length at least `girth_floor`.
pub fn undirected_parts(n: usize, rule: DegreeRule, girth_floor: usize) -> Vec<MixedGraph> {
    let cap = n.saturating_sub(1);
    match rule {
        DegreeRule::Exact(0) => return vec![MixedGraph::empty(n)],
        DegreeRule::Exact(1) => {
            if n % 2 == 1 {
                return Vec::new();
            }
            let edges = (0..n / 2).map(|i| (2 * i, 2 * i + 1));
            return vec![MixedGraph::new(n, edges, []).expect("matching is simple")];
        }
        DegreeRule::Exact(2) => return enumerate_2factors(n, girth_floor),
        DegreeRule::Exact(r) if r > cap || (n * r) % 2 == 1 => return Vec::new(),
        _ => {}
    }
    let ceiling = rule.ceiling(cap);
    let mut found: Vec<MixedGraph> = Vec::new();
    let mut level: BTreeMap<_, MixedGraph> = BTreeMap::new();
    let empty = MixedGraph::empty(n);
    level.insert(canonical_form(&empty), empty);
    while !level.is_empty() {
        let mut next = BTreeMap::new();
        for g in level.values() {
            if (0..n).all(|u| rule.admits(g.undirected_neighbors(u).len())) {
                found.push(g.clone());
            }
            let deg = |u: usize| g.undirected_neighbors(u).len();
            for u in 0..n {
                if deg(u) >= ceiling {
                    continue;
                }
                let dist = undirected_distances_from(g, u);
                for v in u + 1..n {
                    if deg(v) >= ceiling || g.has_edge(u, v) {
                        continue;
                    }
                    if dist[v].is_some_and(|d| d + 1 < girth_floor) {
                        continue;
                    }
                    let mut edges = g.edges().to_vec();
                    edges.push((u, v));
                    let h = MixedGraph::new(n, edges, []).expect("new edge is simple");
                    next.entry(canonical_form(&h)).or_insert(h);
                }
            }
        }
        level = next;
    }
    found
}
