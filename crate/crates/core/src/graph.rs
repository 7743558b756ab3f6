//! The mixed graph data model: a vertex set `0..n` carrying a set of
//! undirected edges and a set of directed arcs.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Structural violations of the mixed graph invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("duplicate arc {0} {1}")]
    DuplicateArc(usize, usize),
    #[error("edge {0} {1} conflicts with an arc between the same vertices")]
    EdgeArcConflict(usize, usize),
    #[error("permutation of length {len} does not match n = {n} or is not a bijection")]
    BadPermutation { len: usize, n: usize },
}

/// A finite mixed graph. Immutable once built; every constructor validates
/// the invariants (no loops, no parallel elements, no edge sharing its
/// endpoints with an arc).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    n: usize,
    /// Sorted, each pair stored low index first.
    edges: Vec<(usize, usize)>,
    /// Sorted.
    arcs: Vec<(usize, usize)>,
    undirected: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    undirected_bits: Vec<FixedBitSet>,
    out_bits: Vec<FixedBitSet>,
}

impl std::fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MixedGraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .field("arcs", &self.arcs)
            .finish()
    }
}

impl MixedGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let check = |v: usize| {
            if v >= n {
                Err(GraphError::VertexOutOfRange { vertex: v, n })
            } else {
                Ok(())
            }
        };
        let mut edge_set = BTreeSet::new();
        for (u, v) in edges {
            check(u)?;
            check(v)?;
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let key = (u.min(v), u.max(v));
            if !edge_set.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
        }
        let mut arc_set = BTreeSet::new();
        for (u, v) in arcs {
            check(u)?;
            check(v)?;
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if !arc_set.insert((u, v)) {
                return Err(GraphError::DuplicateArc(u, v));
            }
        }
        for &(u, v) in &edge_set {
            if arc_set.contains(&(u, v)) || arc_set.contains(&(v, u)) {
                return Err(GraphError::EdgeArcConflict(u, v));
            }
        }
        Ok(Self::from_sorted_sets(
            n,
            edge_set.into_iter().collect(),
            arc_set.into_iter().collect(),
        ))
    }

    fn from_sorted_sets(n: usize, edges: Vec<(usize, usize)>, arcs: Vec<(usize, usize)>) -> Self {
        let mut undirected = vec![Vec::new(); n];
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        let mut undirected_bits = vec![FixedBitSet::with_capacity(n); n];
        let mut out_bits = vec![FixedBitSet::with_capacity(n); n];
        for &(u, v) in &edges {
            undirected[u].push(v);
            undirected[v].push(u);
            undirected_bits[u].insert(v);
            undirected_bits[v].insert(u);
        }
        for &(u, v) in &arcs {
            out[u].push(v);
            inn[v].push(u);
            out_bits[u].insert(v);
        }
        for list in undirected.iter_mut().chain(out.iter_mut()).chain(inn.iter_mut()) {
            list.sort_unstable();
        }
        MixedGraph {
            n,
            edges,
            arcs,
            undirected,
            out,
            inn,
            undirected_bits,
            out_bits,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_sets(n, Vec::new(), Vec::new())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Undirected neighbours U(u), ascending.
    pub fn undirected_neighbors(&self, u: usize) -> &[usize] {
        &self.undirected[u]
    }

    /// Directed out-neighbours Z⁺(u), ascending.
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// Directed in-neighbours Z⁻(u), ascending.
    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.inn[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.undirected_bits[u].contains(v)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out_bits[u].contains(v)
    }

    /// Out-neighbourhood N⁺(u) = U(u) ∪ Z⁺(u) in ascending order.
    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let mut all: Vec<usize> = self.undirected[u].iter().chain(&self.out[u]).copied().collect();
        all.sort_unstable();
        all.into_iter()
    }

    pub fn check_vertex(&self, u: usize) -> Result<(), GraphError> {
        if u < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: u, n: self.n })
        }
    }

    /// Relabel vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<MixedGraph, GraphError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(GraphError::BadPermutation { len: perm.len(), n: self.n });
        }
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(GraphError::BadPermutation { len: perm.len(), n: self.n });
            }
        }
        MixedGraph::new(
            self.n,
            self.edges.iter().map(|&(u, v)| (perm[u], perm[v])),
            self.arcs.iter().map(|&(u, v)| (perm[u], perm[v])),
        )
    }

    /// The same vertex set with every arc reversed.
    pub fn reversed(&self) -> MixedGraph {
        MixedGraph::new(
            self.n,
            self.edges.iter().copied(),
            self.arcs.iter().map(|&(u, v)| (v, u)),
        )
        .expect("reversing arcs preserves the invariants")
    }

    /// G^U: the undirected subgraph on the same vertex set.
    pub fn undirected_part(&self) -> MixedGraph {
        Self::from_sorted_sets(self.n, self.edges.clone(), Vec::new())
    }

    /// G^Z: the directed subgraph on the same vertex set.
    pub fn directed_part(&self) -> MixedGraph {
        Self::from_sorted_sets(self.n, Vec::new(), self.arcs.clone())
    }

    pub fn degrees(&self) -> DegreeProfile {
        let per_vertex: Vec<VertexDegree> = (0..self.n)
            .map(|u| VertexDegree {
                undirected: self.undirected[u].len(),
                out: self.out[u].len(),
                inn: self.inn[u].len(),
            })
            .collect();
        DegreeProfile::from_vertices(per_vertex)
    }

    pub fn neighborhoods(&self, u: usize) -> Result<NeighborSets, GraphError> {
        self.check_vertex(u)?;
        let undirected: BTreeSet<usize> = self.undirected[u].iter().copied().collect();
        let out: BTreeSet<usize> = self.out[u].iter().copied().collect();
        let inn: BTreeSet<usize> = self.inn[u].iter().copied().collect();
        Ok(NeighborSets {
            out_neighborhood: undirected.union(&out).copied().collect(),
            in_neighborhood: undirected.union(&inn).copied().collect(),
            undirected,
            out,
            inn,
        })
    }
}

/// (d(u), d⁺(u), d⁻(u)) for one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexDegree {
    pub undirected: usize,
    pub out: usize,
    #[serde(rename = "in")]
    pub inn: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub vertices: Vec<VertexDegree>,
    pub undirected: Range,
    pub out: Range,
    #[serde(rename = "in")]
    pub inn: Range,
}

impl DegreeProfile {
    fn from_vertices(vertices: Vec<VertexDegree>) -> Self {
        let range = |f: fn(&VertexDegree) -> usize| Range {
            min: vertices.iter().map(f).min().unwrap_or(0),
            max: vertices.iter().map(f).max().unwrap_or(0),
        };
        DegreeProfile {
            undirected: range(|d| d.undirected),
            out: range(|d| d.out),
            inn: range(|d| d.inn),
            vertices,
        }
    }

    /// Every vertex has undirected degree `r` and out-degree `z`.
    pub fn is_out_regular_with(&self, r: usize, z: usize) -> bool {
        self.vertices.iter().all(|d| d.undirected == r && d.out == z)
    }
}

/// U(u), Z⁺(u), Z⁻(u), N⁺(u) and N⁻(u) for one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborSets {
    pub undirected: BTreeSet<usize>,
    pub out: BTreeSet<usize>,
    #[serde(rename = "in")]
    pub inn: BTreeSet<usize>,
    pub out_neighborhood: BTreeSet<usize>,
    pub in_neighborhood: BTreeSet<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_structural_violations() {
        assert_eq!(MixedGraph::new(2, [(0, 0)], []).unwrap_err(), GraphError::Loop(0));
        assert_eq!(
            MixedGraph::new(2, [(0, 1), (1, 0)], []).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            MixedGraph::new(2, [(0, 1)], [(1, 0)]).unwrap_err(),
            GraphError::EdgeArcConflict(0, 1)
        );
        assert!(matches!(
            MixedGraph::new(2, [(0, 2)], []).unwrap_err(),
            GraphError::VertexOutOfRange { vertex: 2, n: 2 }
        ));
        // A digon of arcs is a legal mixed graph.
        assert!(MixedGraph::new(2, [], [(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn single_edge_degrees() {
        let g = MixedGraph::new(2, [(1, 0)], []).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        let d = g.degrees();
        for v in &d.vertices {
            assert_eq!((v.undirected, v.out, v.inn), (1, 0, 0));
        }
    }

    #[test]
    fn isolated_vertex_has_empty_neighborhoods() {
        let g = MixedGraph::new(3, [(0, 1)], []).unwrap();
        let nb = g.neighborhoods(2).unwrap();
        assert!(nb.undirected.is_empty() && nb.out.is_empty() && nb.inn.is_empty());
        assert!(nb.out_neighborhood.is_empty() && nb.in_neighborhood.is_empty());
        assert!(g.neighborhoods(3).is_err());
    }

    #[test]
    fn relabel_rejects_non_bijections() {
        let g = MixedGraph::new(3, [(0, 1)], [(1, 2)]).unwrap();
        assert!(g.relabel(&[0, 0, 1]).is_err());
        assert!(g.relabel(&[0, 1]).is_err());
        let h = g.relabel(&[2, 0, 1]).unwrap();
        assert!(h.has_edge(2, 0) && h.has_arc(0, 1));
    }
}
