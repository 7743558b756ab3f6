//! Walk-count rows maintained under arc insertion and removal, for a fixed
//! undirected part.

use crate::graph::MixedGraph;
use crate::walks::{Adjacency, WalkCounter};

struct Partial {
    undirected: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
}

impl Adjacency for Partial {
    fn order(&self) -> usize {
        self.undirected.len()
    }
    fn undirected(&self, u: usize) -> &[usize] {
        &self.undirected[u]
    }
    fn out(&self, u: usize) -> &[usize] {
        &self.out[u]
    }
}

/// For every root `u`, `count(u, v)` is the number of non-backtracking walks
/// of length `1..=k` from `u` to `v` in the current graph. Only the rows of
/// roots that reach the tail of a new arc in fewer than `k` steps are
/// recomputed.
pub struct IncrementalWalks {
    n: usize,
    k: usize,
    graph: Partial,
    in_degree: Vec<usize>,
    counter: WalkCounter,
    counts: Vec<u128>,
    prefix: Vec<u128>,
    /// saved (counts, prefix) rows, `2n` entries per recomputed root
    saved: Vec<u128>,
    saved_roots: Vec<usize>,
    /// per pushed arc: (tail, head, saved_roots length before the push)
    frames: Vec<(usize, usize, usize)>,
    touched: Vec<usize>,
}

impl IncrementalWalks {
    /// Starts from the undirected part of `base`; its arcs are pushed in
    /// order.
    pub fn new(base: &MixedGraph, k: usize) -> Self {
        assert!(k >= 1, "walk length bound must be positive");
        let n = base.order();
        let graph = Partial {
            undirected: (0..n).map(|u| base.undirected_neighbors(u).to_vec()).collect(),
            out: vec![Vec::new(); n],
        };
        let counter = WalkCounter::new(&graph);
        let mut state = IncrementalWalks {
            n,
            k,
            graph,
            in_degree: vec![0; n],
            counter,
            counts: vec![0; n * n],
            prefix: vec![0; n * n],
            saved: Vec::new(),
            saved_roots: Vec::new(),
            frames: Vec::new(),
            touched: Vec::new(),
        };
        for u in 0..n {
            state.recompute(u);
        }
        for &(a, b) in base.arcs() {
            state.push_arc(a, b);
        }
        state
    }

    fn recompute(&mut self, u: usize) {
        let n = self.n;
        let (row, pre) = (&mut self.counts[u * n..(u + 1) * n], &mut self.prefix[u * n..(u + 1) * n]);
        self.counter.count_split(&self.graph, u, self.k, row, Some(pre), None);
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Walks of length `1..=k` from `u` to `v`.
    pub fn count(&self, u: usize, v: usize) -> u128 {
        self.counts[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u128] {
        &self.counts[u * self.n..(u + 1) * self.n]
    }

    pub fn out(&self, u: usize) -> &[usize] {
        &self.graph.out[u]
    }

    pub fn undirected(&self, u: usize) -> &[usize] {
        &self.graph.undirected[u]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_degree[v]
    }

    pub fn arc_count(&self) -> usize {
        self.frames.len()
    }

    /// Adds the arc `a → b` and returns the roots whose rows changed.
    /// The caller guarantees the arc is new and not parallel to an edge.
    pub fn push_arc(&mut self, a: usize, b: usize) -> &[usize] {
        let n = self.n;
        let mark = self.saved_roots.len();
        self.touched.clear();
        for u in 0..n {
            if u == a || self.prefix[u * n + a] > 0 {
                self.touched.push(u);
            }
        }
        self.graph.out[a].push(b);
        self.in_degree[b] += 1;
        for i in 0..self.touched.len() {
            let u = self.touched[i];
            self.saved.extend_from_slice(&self.counts[u * n..(u + 1) * n]);
            self.saved.extend_from_slice(&self.prefix[u * n..(u + 1) * n]);
            self.saved_roots.push(u);
            self.recompute(u);
        }
        self.frames.push((a, b, mark));
        &self.touched
    }

    /// Undoes the most recent [`push_arc`](Self::push_arc).
    pub fn pop_arc(&mut self) -> Option<(usize, usize)> {
        let n = self.n;
        let (a, b, mark) = self.frames.pop()?;
        while self.saved_roots.len() > mark {
            let u = self.saved_roots.pop().expect("non-empty");
            let start = self.saved.len() - 2 * n;
            self.counts[u * n..(u + 1) * n].copy_from_slice(&self.saved[start..start + n]);
            self.prefix[u * n..(u + 1) * n].copy_from_slice(&self.saved[start + n..]);
            self.saved.truncate(start);
        }
        let popped = self.graph.out[a].pop();
        debug_assert_eq!(popped, Some(b));
        self.in_degree[b] -= 1;
        Some((a, b))
    }

    /// Row `u` admits at most one walk to each other vertex and none back
    /// to `u`.
    pub fn row_geodetic(&self, u: usize) -> bool {
        self.row(u).iter().enumerate().all(|(v, &c)| c <= if v == u { 0 } else { 1 })
    }

    /// Surplus of the Moore tree at `u`: entries beyond the first for each
    /// vertex, counting the root's own entry.
    pub fn row_surplus(&self, u: usize) -> u128 {
        self.row(u)
            .iter()
            .enumerate()
            .map(|(v, &c)| (c + u128::from(v == u)).saturating_sub(1))
            .sum()
    }

    /// Every vertex is reached from `u` within `k` steps.
    pub fn row_covers(&self, u: usize) -> bool {
        self.row(u).iter().enumerate().all(|(v, &c)| v == u || c > 0)
    }

    pub fn is_k_geodetic(&self) -> bool {
        (0..self.n).all(|u| self.row_geodetic(u))
    }

    pub fn to_graph(&self) -> MixedGraph {
        let edges = (0..self.n).flat_map(|u| self.graph.undirected[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
        let arcs = (0..self.n).flat_map(|u| self.graph.out[u].iter().map(move |&v| (u, v)));
        MixedGraph::new(self.n, edges, arcs).expect("partial graph stays simple")
    }
}
