//! Canonical labeling of mixed graphs by individualization and refinement.
//!
//! Vertices are refined by the multiset of (relation, neighbour colour)
//! pairs, where the relation distinguishes an edge, an out-arc, an in-arc
//! and an arc digon. The search tree branches on the first non-singleton
//! cell; each leaf yields a relabeled pair-relation string, and the
//! lexicographically greatest leaf is the canonical form. Leaves equal to
//! the first or the best leaf yield automorphisms, which prune sibling
//! branches lying in one orbit of the pointwise stabilizer of the path.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::MixedGraph;

/// Pair relation codes in the certificate.
const NONE: u8 = 0;
const EDGE: u8 = 1;
const OUT: u8 = 2;
const IN: u8 = 3;
const DIGON: u8 = 4;

/// A byte string identifying the isomorphism class of a mixed graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

/// Result of a canonical labeling run.
#[derive(Debug, Clone)]
pub struct Canonization {
    pub form: CanonicalForm,
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    /// Automorphisms discovered during the search (each `perm[v]` is the
    /// image of `v`). They preserve the initial colouring.
    pub generators: Vec<Vec<usize>>,
    /// Search tree leaves visited.
    pub leaves: usize,
}

impl Canonization {
    /// The input graph relabeled into canonical position.
    pub fn canonical_graph(&self, g: &MixedGraph) -> MixedGraph {
        g.relabel(&self.labeling).expect("labeling is a permutation")
    }
}

pub fn canonical_form(g: &MixedGraph) -> CanonicalForm {
    canonize(g, None).form
}

pub fn are_isomorphic(g: &MixedGraph, h: &MixedGraph) -> bool {
    g.order() == h.order()
        && g.edges().len() == h.edges().len()
        && g.arcs().len() == h.arcs().len()
        && canonical_form(g) == canonical_form(h)
}

/// Canonical labeling, optionally respecting an initial vertex colouring
/// (smaller colour values come first). Forms of differently coloured inputs
/// are only comparable when the colour classes have the same sizes.
pub fn canonize(g: &MixedGraph, colors: Option<&[usize]>) -> Canonization {
    let n = g.order();
    let mut rel = vec![NONE; n * n];
    for &(u, v) in g.edges() {
        rel[u * n + v] = EDGE;
        rel[v * n + u] = EDGE;
    }
    for &(u, v) in g.arcs() {
        let (fwd, back) = (u * n + v, v * n + u);
        if rel[back] == OUT {
            rel[fwd] = DIGON;
            rel[back] = DIGON;
        } else {
            rel[fwd] = OUT;
            rel[back] = IN;
        }
    }
    let neighbors: Vec<Vec<(u8, usize)>> = (0..n)
        .map(|u| (0..n).filter(|&v| rel[u * n + v] != NONE).map(|v| (rel[u * n + v], v)).collect())
        .collect();
    let mut search = Search {
        n,
        rel,
        neighbors,
        first: None,
        best: None,
        generators: Vec::new(),
        leaves: 0,
    };
    let initial = match colors {
        Some(c) => normalize(c),
        None => vec![0; n],
    };
    let root = search.refine(initial);
    let mut path = Vec::new();
    search.descend(root, &mut path);

    let (best_cert, best_perm) = search.best.expect("every search reaches a leaf");
    let mut bytes = Vec::with_capacity(8 + best_cert.len());
    bytes.extend_from_slice(&(n as u64).to_le_bytes());
    bytes.extend_from_slice(&best_cert);
    Canonization {
        form: CanonicalForm { bytes },
        labeling: best_perm,
        generators: search.generators,
        leaves: search.leaves,
    }
}

/// Dense ranks of arbitrary colour values.
fn normalize(colors: &[usize]) -> Vec<usize> {
    let mut values: Vec<usize> = colors.to_vec();
    values.sort_unstable();
    values.dedup();
    colors.iter().map(|c| values.binary_search(c).unwrap()).collect()
}

struct Search {
    n: usize,
    rel: Vec<u8>,
    neighbors: Vec<Vec<(u8, usize)>>,
    first: Option<(Vec<u8>, Vec<usize>)>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
    leaves: usize,
}

impl Search {
    /// Iterated colour refinement to an equitable colouring. Colours stay
    /// dense and cells keep their relative order, so the result depends
    /// only on the colouring and not on vertex names.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let n = self.n;
        let mut cells = colors.iter().max().map_or(0, |m| m + 1);
        loop {
            let mut sigs: Vec<(usize, Vec<(u8, usize)>, usize)> = (0..n)
                .map(|u| {
                    let mut s: Vec<(u8, usize)> =
                        self.neighbors[u].iter().map(|&(r, v)| (r, colors[v])).collect();
                    s.sort_unstable();
                    (colors[u], s, u)
                })
                .collect();
            sigs.sort_unstable();
            let mut next = vec![0; n];
            let mut c = 0;
            for i in 0..n {
                if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                    c += 1;
                }
                next[sigs[i].2] = c;
            }
            let new_cells = if n == 0 { 0 } else { c + 1 };
            colors = next;
            if new_cells == cells {
                return colors;
            }
            cells = new_cells;
        }
    }

    fn certificate(&self, colors: &[usize]) -> Vec<u8> {
        let n = self.n;
        let mut at = vec![0; n];
        for (v, &c) in colors.iter().enumerate() {
            at[c] = v;
        }
        let mut cert = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for p in 0..n {
            for q in p + 1..n {
                cert.push(self.rel[at[p] * n + at[q]]);
            }
        }
        cert
    }

    fn descend(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) {
        let n = self.n;
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| counts[c] > 1) else {
            self.leaf(colors);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit_as_explored(v, &explored, path) {
                continue;
            }
            explored.push(v);
            // individualize v: it keeps `target`, the rest of its cell and all
            // later cells shift up by one
            let child: Vec<usize> = (0..n)
                .map(|w| {
                    let c = colors[w];
                    if c > target || (c == target && w != v) {
                        c + 1
                    } else {
                        c
                    }
                })
                .collect();
            let child = self.refine(child);
            path.push(v);
            self.descend(child, path);
            path.pop();
        }
    }

    /// Whether `v` lies in the orbit of an explored sibling under the
    /// automorphisms found so far that fix `path` pointwise.
    fn same_orbit_as_explored(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gen in &self.generators {
            if path.iter().all(|&p| gen[p] == p) {
                any = true;
                for x in 0..self.n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, gen[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == root)
    }

    fn leaf(&mut self, colors: Vec<usize>) {
        self.leaves += 1;
        let cert = self.certificate(&colors);
        // automorphism: vertex x here sits where `other[...]` sits in the other leaf
        let automorphism = |other: &[usize]| -> Vec<usize> {
            let mut at = vec![0; colors.len()];
            for (v, &c) in other.iter().enumerate() {
                at[c] = v;
            }
            colors.iter().map(|&c| at[c]).collect()
        };
        match &self.first {
            None => {
                self.first = Some((cert.clone(), colors.clone()));
                self.best = Some((cert, colors));
                return;
            }
            Some((first_cert, first_perm)) if *first_cert == cert => {
                let gamma = automorphism(first_perm);
                self.push_generator(gamma);
                return;
            }
            _ => {}
        }
        let (best_cert, best_perm) = self.best.as_ref().unwrap();
        match cert.cmp(best_cert) {
            std::cmp::Ordering::Equal => {
                let gamma = automorphism(best_perm);
                self.push_generator(gamma);
            }
            std::cmp::Ordering::Greater => self.best = Some((cert, colors)),
            std::cmp::Ordering::Less => {}
        }
    }

    fn push_generator(&mut self, gamma: Vec<usize>) {
        if gamma.iter().enumerate().any(|(i, &g)| i != g) && !self.generators.contains(&gamma) {
            self.generators.push(gamma);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_and_arc_differ_but_arc_direction_does_not() {
        let e = MixedGraph::new(2, [(0, 1)], []).unwrap();
        let a = MixedGraph::new(2, [], [(0, 1)]).unwrap();
        let b = MixedGraph::new(2, [], [(1, 0)]).unwrap();
        assert_ne!(canonical_form(&e), canonical_form(&a));
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert!(are_isomorphic(&a, &b));
    }

    #[test]
    fn directed_paths_vs_cycles() {
        let path = MixedGraph::new(3, [], [(0, 1), (1, 2)]).unwrap();
        let out_star = MixedGraph::new(3, [], [(0, 1), (0, 2)]).unwrap();
        let in_star = MixedGraph::new(3, [], [(1, 0), (2, 0)]).unwrap();
        assert!(!are_isomorphic(&path, &out_star));
        assert!(!are_isomorphic(&out_star, &in_star));
        assert!(are_isomorphic(&in_star, &out_star.reversed()));
    }

    #[test]
    fn automorphisms_are_genuine() {
        let c = MixedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)), []).unwrap();
        let canon = canonize(&c, None);
        assert!(!canon.generators.is_empty());
        for gen in &canon.generators {
            assert_eq!(c.relabel(gen).unwrap(), c);
        }
        assert_eq!(canon.canonical_graph(&c).order(), 6);
    }

    #[test]
    fn coloured_labeling_fixes_colour_classes() {
        let c = MixedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)), []).unwrap();
        let mut colors = vec![1; 6];
        colors[0] = 0;
        let canon = canonize(&c, Some(&colors));
        for gen in &canon.generators {
            assert_eq!(gen[0], 0);
        }
        assert_eq!(canon.labeling[0], 0);
    }

    #[test]
    fn empty_and_tiny_graphs() {
        assert_eq!(canonical_form(&MixedGraph::empty(0)), canonical_form(&MixedGraph::empty(0)));
        assert_ne!(canonical_form(&MixedGraph::empty(1)), canonical_form(&MixedGraph::empty(2)));
        let big_empty = canonize(&MixedGraph::empty(12), None);
        assert!(big_empty.leaves < 500, "orbit pruning keeps S_12 small: {}", big_empty.leaves);
    }
}
