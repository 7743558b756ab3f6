//! Slow, independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use mixed_moore::certify::{check_graph, Classification, Mode};
use mixed_moore::graph::MixedGraph;

/// Counts of non-backtracking walks of length `1..=k` from `root`, by
/// explicit enumeration of every walk.
pub fn brute_walk_counts(g: &MixedGraph, root: usize, k: usize) -> Vec<u128> {
    fn go(g: &MixedGraph, at: usize, came_by_edge_from: Option<usize>, left: usize, counts: &mut [u128]) {
        if left == 0 {
            return;
        }
        for &w in g.undirected_neighbors(at) {
            if Some(w) == came_by_edge_from {
                continue;
            }
            counts[w] += 1;
            go(g, w, Some(at), left - 1, counts);
        }
        for &w in g.out_neighbors(at) {
            counts[w] += 1;
            go(g, w, None, left - 1, counts);
        }
    }
    let mut counts = vec![0u128; g.order()];
    go(g, root, None, k, &mut counts);
    counts
}

pub fn brute_geodetic(g: &MixedGraph, k: usize) -> bool {
    (0..g.order()).all(|u| {
        brute_walk_counts(g, u, k)
            .iter()
            .enumerate()
            .all(|(v, &c)| if v == u { c == 0 } else { c <= 1 })
    })
}

/// Breadth-first distances over edges only.
pub fn bfs_undirected(g: &MixedGraph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    dist[s] = Some(0);
    let mut frontier = vec![s];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &x in &frontier {
            for &y in g.undirected_neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(d);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    dist
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k.is_multiple_of(2) {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// Pair relation matrix: 0 none, 1 edge, 2 arc u→v, 3 arc v→u, 4 both arcs.
pub fn relation_codes(g: &MixedGraph) -> Vec<u8> {
    let n = g.order();
    let mut m = vec![0u8; n * n];
    for &(u, v) in g.edges() {
        m[u * n + v] = 1;
        m[v * n + u] = 1;
    }
    for &(u, v) in g.arcs() {
        let (f, b) = (u * n + v, v * n + u);
        if m[b] == 2 {
            m[f] = 4;
            m[b] = 4;
        } else {
            m[f] = 2;
            m[b] = 3;
        }
    }
    m
}

/// Lexicographically least relation matrix over all relabelings.
pub fn brute_canonical(g: &MixedGraph, perms: &[Vec<usize>]) -> Vec<u8> {
    let n = g.order();
    let m = relation_codes(g);
    let mut best: Option<Vec<u8>> = None;
    let mut img = vec![0u8; n * n];
    for p in perms {
        // image position (p[u], p[v]) holds relation of (u, v)
        for u in 0..n {
            for v in 0..n {
                img[p[u] * n + p[v]] = m[u * n + v];
            }
        }
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img.clone());
        }
    }
    let mut out = vec![n as u8];
    out.extend(best.unwrap_or_default());
    out
}

pub fn brute_isomorphic(g: &MixedGraph, h: &MixedGraph) -> bool {
    if g.order() != h.order() || g.edges().len() != h.edges().len() || g.arcs().len() != h.arcs().len() {
        return false;
    }
    let n = g.order();
    let (mg, mh) = (relation_codes(g), relation_codes(h));
    permutations(n).iter().any(|p| (0..n).all(|u| (0..n).all(|v| mh[p[u] * n + p[v]] == mg[u * n + v])))
}

#[derive(Clone, Copy, Debug)]
pub enum Bound {
    Exact(usize),
    AtMost(usize),
    AtLeast(usize),
}

impl Bound {
    pub fn admits(self, d: usize) -> bool {
        match self {
            Bound::Exact(x) => d == x,
            Bound::AtMost(x) => d <= x,
            Bound::AtLeast(x) => d >= x,
        }
    }
}

/// Every edge set on `n` labeled vertices with degrees inside `rule`, one
/// per isomorphism class of undirected graph.
pub fn undirected_representatives(n: usize, rule: Bound, perms: &[Vec<usize>]) -> Vec<MixedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        let mut deg = vec![0; n];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        if !deg.iter().all(|&d| rule.admits(d)) {
            continue;
        }
        let g = MixedGraph::new(n, edges, []).unwrap();
        if seen.insert(brute_canonical(&g, perms)) {
            reps.push(g);
        }
    }
    reps
}

/// Filter-everything enumeration: every undirected representative, every
/// choice of out-neighbourhood per vertex, certified by `check_graph`, then
/// deduplicated by brute-force canonical form.
#[allow(clippy::too_many_arguments)]
pub fn naive_extremal(
    r: usize,
    z: usize,
    k: usize,
    mode: Mode,
    n: usize,
    undirected: Bound,
    out: Bound,
    allow_digons: bool,
    expected: &Classification,
) -> BTreeSet<Vec<u8>> {
    let perms = permutations(n);
    let mut classes = BTreeSet::new();
    for h in undirected_representatives(n, undirected, &perms) {
        let options: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|v| {
                let free: Vec<usize> = (0..n).filter(|&w| w != v && !h.has_edge(v, w)).collect();
                (0u64..1 << free.len())
                    .map(|m| free.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &w)| w).collect::<Vec<_>>())
                    .filter(|s| out.admits(s.len()))
                    .collect()
            })
            .collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let mut choice = vec![0usize; n];
        'outer: loop {
            let arcs: Vec<(usize, usize)> =
                (0..n).flat_map(|v| options[v][choice[v]].iter().map(move |&w| (v, w))).collect();
            let digon = arcs.iter().any(|&(a, b)| arcs.contains(&(b, a)));
            if allow_digons || !digon {
                let g = MixedGraph::new(n, h.edges().iter().copied(), arcs).unwrap();
                if let Ok(rep) = check_graph(&g, r, z, k, mode) {
                    if rep.classification == *expected {
                        classes.insert(brute_canonical(&g, &perms));
                    }
                }
            }
            for v in 0..n {
                choice[v] += 1;
                if choice[v] < options[v].len() {
                    continue 'outer;
                }
                choice[v] = 0;
            }
            break;
        }
    }
    classes
}
