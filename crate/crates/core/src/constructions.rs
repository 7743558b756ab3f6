//! Named graphs and parametric generators: the order-10 almost mixed Moore
//! graph, the order-12 2-geodetic graph with excess one, dihedral Cayley
//! graphs and the collapsed Kautz digraphs.

use std::fmt;

use thiserror::Error;

use crate::graph::{GraphError, MixedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("bad generator word {0:?}")]
    BadWord(String),
    #[error("edge generator {0} is not an involution")]
    EdgeGeneratorNotInvolution(String),
    #[error("arc generator {0} is the identity or an involution")]
    ArcGeneratorInvolution(String),
    #[error("generators {0} and {1} evaluate to the same element")]
    Conflict(String, String),
    #[error("dihedral half-order must be at least 1")]
    BadOrder,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An element `x^rotation y^flip` of the dihedral group of order `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    pub rotation: usize,
    pub flip: bool,
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rotation, self.flip) {
            (0, false) => write!(f, "e"),
            (0, true) => write!(f, "y"),
            (r, false) => write!(f, "x^{r}"),
            (r, true) => write!(f, "x^{r}y"),
        }
    }
}

/// `⟨x, y : x^m = y² = e, yxy⁻¹ = x⁻¹⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralGroup {
    pub m: usize,
}

impl DihedralGroup {
    pub fn new(m: usize) -> Result<Self, ConstructionError> {
        if m == 0 {
            return Err(ConstructionError::BadOrder);
        }
        Ok(DihedralGroup { m })
    }

    pub fn order(&self) -> usize {
        2 * self.m
    }

    pub fn identity(&self) -> DihedralElement {
        DihedralElement { rotation: 0, flip: false }
    }

    /// Elements are indexed `rotation + m * flip`.
    pub fn index(&self, g: DihedralElement) -> usize {
        g.rotation + if g.flip { self.m } else { 0 }
    }

    pub fn element(&self, i: usize) -> DihedralElement {
        DihedralElement { rotation: i % self.m, flip: i >= self.m }
    }

    pub fn elements(&self) -> impl Iterator<Item = DihedralElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// `x^a y^s · x^b y^t = x^{a + (-1)^s b} y^{s+t}`.
    pub fn mul(&self, g: DihedralElement, h: DihedralElement) -> DihedralElement {
        let m = self.m;
        let rotation = if g.flip {
            (g.rotation + m - h.rotation % m) % m
        } else {
            (g.rotation + h.rotation) % m
        };
        DihedralElement { rotation, flip: g.flip != h.flip }
    }

    pub fn inverse(&self, g: DihedralElement) -> DihedralElement {
        if g.flip {
            g
        } else {
            DihedralElement { rotation: (self.m - g.rotation) % self.m, flip: false }
        }
    }

    pub fn is_involution(&self, g: DihedralElement) -> bool {
        g != self.identity() && self.mul(g, g) == self.identity()
    }

    /// Checks closure, identity, inverses and associativity on the full
    /// multiplication table, and the defining relations.
    pub fn verify_axioms(&self) -> bool {
        let e = self.identity();
        let elems: Vec<_> = self.elements().collect();
        let x = DihedralElement { rotation: 1 % self.m, flip: false };
        let y = DihedralElement { rotation: 0, flip: true };
        let pow = |g: DihedralElement, n: usize| (0..n).fold(e, |acc, _| self.mul(acc, g));
        if pow(x, self.m) != e || self.mul(y, y) != e {
            return false;
        }
        if self.mul(self.mul(y, x), self.inverse(y)) != self.inverse(x) {
            return false;
        }
        for &a in &elems {
            if self.mul(a, e) != a || self.mul(e, a) != a || self.mul(a, self.inverse(a)) != e {
                return false;
            }
            for &b in &elems {
                for &c in &elems {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Evaluates a word over `x`, `y` with optional integer exponents, such
    /// as `"x^2"`, `"xy"`, `"x^-1y"` or `"e"`.
    pub fn eval_word(&self, word: &str) -> Result<DihedralElement, ConstructionError> {
        let bad = || ConstructionError::BadWord(word.to_string());
        let mut acc = self.identity();
        let chars: Vec<char> = word.trim().chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(bad());
        }
        if chars == ['e'] {
            return Ok(acc);
        }
        let mut i = 0;
        while i < chars.len() {
            let letter = match chars[i] {
                'x' => DihedralElement { rotation: 1 % self.m, flip: false },
                'y' => DihedralElement { rotation: 0, flip: true },
                _ => return Err(bad()),
            };
            i += 1;
            let mut exponent: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                exponent = digits.parse().map_err(|_| bad())?;
            }
            let base = if exponent < 0 { self.inverse(letter) } else { letter };
            for _ in 0..exponent.unsigned_abs() {
                acc = self.mul(acc, base);
            }
        }
        Ok(acc)
    }
}

/// Cayley graph of the dihedral group of order `2m` under right
/// multiplication: edges `{g, gs}` for each edge generator `s` and arcs
/// `(g, gs)` for each arc generator. Vertex `i` is group element
/// `x^(i mod m) y^(i / m)`.
pub fn dihedral_cayley<S: AsRef<str>>(
    m: usize,
    arc_gens: &[S],
    edge_gens: &[S],
) -> Result<MixedGraph, ConstructionError> {
    let group = DihedralGroup::new(m)?;
    let eval_all = |words: &[S]| -> Result<Vec<(DihedralElement, String)>, ConstructionError> {
        words
            .iter()
            .map(|w| Ok((group.eval_word(w.as_ref())?, w.as_ref().to_string())))
            .collect()
    };
    let edge_gens = eval_all(edge_gens)?;
    let arc_gens = eval_all(arc_gens)?;
    let all: Vec<&(DihedralElement, String)> = edge_gens.iter().chain(&arc_gens).collect();
    for (i, a) in all.iter().enumerate() {
        if let Some(b) = all[..i].iter().find(|b| b.0 == a.0) {
            return Err(ConstructionError::Conflict(b.1.clone(), a.1.clone()));
        }
    }
    for (el, word) in &edge_gens {
        if !group.is_involution(*el) {
            return Err(ConstructionError::EdgeGeneratorNotInvolution(word.clone()));
        }
    }
    for (el, word) in &arc_gens {
        if *el == group.identity() || group.is_involution(*el) {
            return Err(ConstructionError::ArcGeneratorInvolution(word.clone()));
        }
    }
    let edge_elems: Vec<DihedralElement> = edge_gens.iter().map(|g| g.0).collect();
    let arc_elems: Vec<DihedralElement> = arc_gens.iter().map(|g| g.0).collect();
    let mut edges = std::collections::BTreeSet::new();
    let mut arcs = Vec::new();
    for g in group.elements() {
        let gi = group.index(g);
        for &s in &edge_elems {
            let h = group.index(group.mul(g, s));
            edges.insert((gi.min(h), gi.max(h)));
        }
        for &s in &arc_elems {
            arcs.push((gi, group.index(group.mul(g, s))));
        }
    }
    Ok(MixedGraph::new(group.order(), edges, arcs)?)
}

/// Left multiplication by `g` as a vertex permutation of a dihedral Cayley
/// graph (always an automorphism under the right-multiplication convention).
pub fn dihedral_left_translation(m: usize, g: DihedralElement) -> Vec<usize> {
    let group = DihedralGroup { m };
    group.elements().map(|h| group.index(group.mul(g, h))).collect()
}

/// The almost mixed Moore graph of order 10 with `r = 2, z = 1, k = 2`.
/// Listed 1-based below; vertex `vi` becomes index `i - 1`.
pub fn almost_moore_10() -> MixedGraph {
    let edges = [(1, 2), (1, 5), (2, 3), (3, 4), (4, 5), (6, 7), (6, 10), (7, 8), (8, 9), (9, 10)];
    let arcs = [(2, 6), (6, 5), (5, 10), (10, 3), (3, 9), (9, 1), (1, 8), (8, 4), (4, 7), (7, 2)];
    MixedGraph::new(
        10,
        edges.iter().map(|&(u, v)| (u - 1, v - 1)),
        arcs.iter().map(|&(u, v)| (u - 1, v - 1)),
    )
    .expect("fixture is a valid mixed graph")
}

/// The 2-geodetic mixed graph with `r = 2, z = 1` and excess one: a
/// 12-cycle with arcs jumping four steps, forming four directed triangles.
pub fn excess_one_12() -> MixedGraph {
    let edges = (0..12).map(|i| (i, (i + 1) % 12));
    let triangles = [[0, 4, 8], [2, 6, 10], [1, 9, 5], [3, 11, 7]];
    let arcs = triangles.iter().flat_map(|t| (0..3).map(move |i| (t[i], t[(i + 1) % 3])));
    MixedGraph::new(12, edges, arcs).expect("fixture is a valid mixed graph")
}

/// The Kautz digraph on words `ab` (`a ≠ b`) over `z + 2` letters with each
/// digon `ab ↔ ba` collapsed into an edge. Order `z² + 3z + 2`, undirected
/// degree 1, out-degree `z`. Vertices are indexed in lexicographic order of
/// their words.
pub fn kautz_collapse(z: usize) -> MixedGraph {
    let letters = z + 2;
    let words: Vec<(usize, usize)> = (0..letters)
        .flat_map(|a| (0..letters).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let index = |w: (usize, usize)| words.binary_search(&w).expect("word exists");
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for &(a, b) in &words {
        let u = index((a, b));
        for c in (0..letters).filter(|&c| c != b) {
            let v = index((b, c));
            if c == a {
                if u < v {
                    edges.push((u, v));
                }
            } else {
                arcs.push((u, v));
            }
        }
    }
    MixedGraph::new(words.len(), edges, arcs).expect("collapsed Kautz digraph is a valid mixed graph")
}
