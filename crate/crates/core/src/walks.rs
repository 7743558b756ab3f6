//! Non-backtracking walk counting, distances and diameter.
//!
//! A walk step traverses an edge in either direction or an arc forwards.
//! A walk is non-backtracking when it never traverses the same edge twice
//! in a row (`u ~ v ~ u`). Any other pattern, including an edge followed by
//! an arc back to the start, is allowed.

use std::collections::VecDeque;

use crate::graph::{GraphError, MixedGraph};

/// Read access to a mixed adjacency structure. Implemented by
/// [`MixedGraph`] and by the search's mutable partial graphs.
pub trait Adjacency {
    fn order(&self) -> usize;
    fn undirected(&self, u: usize) -> &[usize];
    fn out(&self, u: usize) -> &[usize];
}

impl Adjacency for MixedGraph {
    fn order(&self) -> usize {
        MixedGraph::order(self)
    }
    fn undirected(&self, u: usize) -> &[usize] {
        self.undirected_neighbors(u)
    }
    fn out(&self, u: usize) -> &[usize] {
        self.out_neighbors(u)
    }
}

/// Dynamic program over "last step" states. The undirected structure is
/// fixed at construction; arcs are read from the adjacency on every call,
/// so one counter can serve a graph whose arc set changes.
#[derive(Debug, Clone)]
pub struct WalkCounter {
    /// offset[x]..offset[x+1] are the slots of x's undirected neighbours.
    offset: Vec<usize>,
    /// reverse[slot(x, i)] = slot(w, j) where w = U(x)[i] and U(w)[j] = x.
    reverse: Vec<usize>,
    /// neighbour vertex of each slot.
    target: Vec<usize>,
    total: Vec<u128>,
    next_total: Vec<u128>,
    edge_in: Vec<u128>,
    next_edge_in: Vec<u128>,
}

impl WalkCounter {
    pub fn new<A: Adjacency + ?Sized>(adj: &A) -> Self {
        let n = adj.order();
        let mut offset = Vec::with_capacity(n + 1);
        let mut target = Vec::new();
        offset.push(0);
        for x in 0..n {
            target.extend_from_slice(adj.undirected(x));
            offset.push(target.len());
        }
        let mut reverse = vec![0; target.len()];
        for x in 0..n {
            for slot in offset[x]..offset[x + 1] {
                let w = target[slot];
                let back = (offset[w]..offset[w + 1])
                    .find(|&s| target[s] == x)
                    .expect("undirected adjacency is symmetric");
                reverse[slot] = back;
            }
        }
        let slots = target.len();
        WalkCounter {
            offset,
            reverse,
            target,
            total: vec![0; n],
            next_total: vec![0; n],
            edge_in: vec![0; slots],
            next_edge_in: vec![0; slots],
        }
    }

    /// Writes into `counts[v]` the number of non-backtracking walks of
    /// length `1..=k` from `root` to `v`. `levels`, when given, receives the
    /// total number of walks of each length `0..=k`.
    pub fn count_from<A: Adjacency + ?Sized>(
        &mut self,
        adj: &A,
        root: usize,
        k: usize,
        counts: &mut [u128],
        levels: Option<&mut Vec<u128>>,
    ) {
        self.count_split(adj, root, k, counts, None, levels);
    }

    /// As [`count_from`](Self::count_from); `prefix`, when given, receives
    /// the counts of walks of length `1..k` (one short of `k`).
    pub fn count_split<A: Adjacency + ?Sized>(
        &mut self,
        adj: &A,
        root: usize,
        k: usize,
        counts: &mut [u128],
        mut prefix: Option<&mut [u128]>,
        mut levels: Option<&mut Vec<u128>>,
    ) {
        let n = self.total.len();
        debug_assert_eq!(adj.order(), n);
        counts[..n].iter_mut().for_each(|c| *c = 0);
        self.total.iter_mut().for_each(|c| *c = 0);
        self.edge_in.iter_mut().for_each(|c| *c = 0);
        self.total[root] = 1;
        if let Some(levels) = levels.as_deref_mut() {
            levels.clear();
            levels.push(1);
        }
        for step in 0..k {
            if step + 1 == k {
                if let Some(p) = prefix.as_deref_mut() {
                    p[..n].copy_from_slice(&counts[..n]);
                }
            }
            self.next_total.iter_mut().for_each(|c| *c = 0);
            for x in 0..n {
                let here = self.total[x];
                if here == 0 {
                    continue;
                }
                for slot in self.offset[x]..self.offset[x + 1] {
                    let w = self.target[slot];
                    let back = self.reverse[slot];
                    // walks that arrived at x over the edge from w may not return to w
                    let forward = here - self.edge_in[slot];
                    self.next_edge_in[back] = forward;
                    self.next_total[w] = self.next_total[w].saturating_add(forward);
                }
                for &w in adj.out(x) {
                    self.next_total[w] = self.next_total[w].saturating_add(here);
                }
            }
            // slots of vertices with no walks were not written this round
            for x in 0..n {
                if self.total[x] == 0 {
                    for slot in self.offset[x]..self.offset[x + 1] {
                        self.next_edge_in[self.reverse[slot]] = 0;
                    }
                }
            }
            std::mem::swap(&mut self.total, &mut self.next_total);
            std::mem::swap(&mut self.edge_in, &mut self.next_edge_in);
            let mut level_total: u128 = 0;
            for (c, &t) in counts.iter_mut().zip(&self.total) {
                *c = c.saturating_add(t);
                level_total = level_total.saturating_add(t);
            }
            if let Some(levels) = levels.as_deref_mut() {
                levels.push(level_total);
            }
        }
    }
}

/// Number of non-backtracking walks of length `1..=k` from `u` to `v`.
/// The empty walk is not counted.
pub fn count_nbt_walks(g: &MixedGraph, u: usize, v: usize, k: usize) -> Result<u128, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let mut counts = vec![0; g.order()];
    WalkCounter::new(g).count_from(g, u, k, &mut counts, None);
    Ok(counts[v])
}

/// Per-target walk counts from `u` (lengths `1..=k`).
pub fn nbt_walk_counts_from(g: &MixedGraph, u: usize, k: usize) -> Result<Vec<u128>, GraphError> {
    g.check_vertex(u)?;
    let mut counts = vec![0; g.order()];
    WalkCounter::new(g).count_from(g, u, k, &mut counts, None);
    Ok(counts)
}

/// Shortest mixed walk distances from `u`; `None` marks unreachable vertices.
pub fn distances_from(g: &MixedGraph, u: usize) -> Result<Vec<Option<usize>>, GraphError> {
    g.check_vertex(u)?;
    let mut dist = vec![None; g.order()];
    dist[u] = Some(0);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &w in g.undirected_neighbors(x).iter().chain(g.out_neighbors(x)) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

pub fn distance(g: &MixedGraph, u: usize, v: usize) -> Result<Option<usize>, GraphError> {
    g.check_vertex(v)?;
    Ok(distances_from(g, u)?[v])
}

/// Maximum distance over ordered pairs; `None` when some pair is unreachable.
pub fn diameter(g: &MixedGraph) -> Option<usize> {
    let mut best = 0;
    for u in 0..g.order() {
        for d in distances_from(g, u).expect("vertex in range") {
            best = best.max(d?);
        }
    }
    Some(best)
}

/// Distances within the undirected subgraph G^U.
pub fn undirected_distances_from(g: &MixedGraph, u: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    dist[u] = Some(0);
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &w in g.undirected_neighbors(x) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> MixedGraph {
        MixedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)), []).unwrap()
    }

    #[test]
    fn small_walk_counts() {
        assert_eq!(count_nbt_walks(&cycle(5), 0, 1, 2).unwrap(), 1);
        assert_eq!(count_nbt_walks(&cycle(4), 0, 2, 2).unwrap(), 2);
        let digon = MixedGraph::new(2, [], [(0, 1), (1, 0)]).unwrap();
        assert_eq!(count_nbt_walks(&digon, 0, 0, 2).unwrap(), 1);
        // u ~ u never comes back by backtracking
        assert_eq!(count_nbt_walks(&cycle(5), 0, 0, 2).unwrap(), 0);
        assert_eq!(count_nbt_walks(&cycle(5), 0, 0, 5).unwrap(), 2);
    }

    #[test]
    fn edge_then_opposing_arc_is_counted() {
        // 0 -> 1 ~ 2 -> 0
        let g = MixedGraph::new(3, [(1, 2)], [(0, 1), (2, 0)]).unwrap();
        assert_eq!(count_nbt_walks(&g, 0, 0, 3).unwrap(), 1);
        // edge then arc: 1 ~ 2 -> 0 -> 1
        assert_eq!(count_nbt_walks(&g, 1, 1, 3).unwrap(), 1);
    }

    #[test]
    fn distances_and_diameter() {
        let g = MixedGraph::new(3, [], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(distance(&g, 0, 2).unwrap(), Some(2));
        assert_eq!(distance(&g, 2, 0).unwrap(), None);
        assert_eq!(distance(&g, 1, 1).unwrap(), Some(0));
        assert_eq!(diameter(&g), None);
        assert_eq!(diameter(&cycle(7)), Some(3));
        assert!(distance(&g, 0, 5).is_err());
    }
}
