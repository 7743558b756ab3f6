use serde::{Deserialize, Serialize};

use super::{outliers, repeats, CertifyError};
use crate::bounds::moore_bound;
use crate::graph::MixedGraph;
use crate::walks::diameter;

/// Dense square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn all_ones(n: usize) -> Self {
        IntMatrix { n, data: vec![1; n * n] }
    }

    /// Adjacency matrix: an edge contributes to both `(u, v)` and `(v, u)`,
    /// an arc `u → v` to `(u, v)` only.
    pub fn adjacency(g: &MixedGraph) -> Self {
        let mut m = Self::zeros(g.order());
        for &(u, v) in g.edges() {
            m[(u, v)] = 1;
            m[(v, u)] = 1;
        }
        for &(u, v) in g.arcs() {
            m[(u, v)] = 1;
        }
        m
    }

    /// Permutation-style matrix with a 1 at `(i, map[i])`.
    pub fn from_map(map: &[usize]) -> Self {
        let mut m = Self::zeros(map.len());
        for (i, &j) in map.iter().enumerate() {
            m[(i, j)] += 1;
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o[(l, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        IntMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        IntMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: i64) -> Self {
        IntMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

/// `I + A + A²`: all walks of length at most two, backtracking included.
pub fn walk_matrix(g: &MixedGraph) -> IntMatrix {
    let a = IntMatrix::adjacency(g);
    IntMatrix::identity(g.order()).add(&a).add(&a.mul(&a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixIdentity {
    pub holds: bool,
    pub mismatches: Vec<Mismatch>,
}

fn compare(lhs: &IntMatrix, rhs: &IntMatrix) -> MatrixIdentity {
    let mut mismatches = Vec::new();
    for i in 0..lhs.n {
        for j in 0..lhs.n {
            if lhs[(i, j)] != rhs[(i, j)] {
                mismatches.push(Mismatch { row: i, col: j, lhs: lhs[(i, j)], rhs: rhs[(i, j)] });
            }
        }
    }
    MatrixIdentity { holds: mismatches.is_empty(), mismatches }
}

/// Common out-regular degrees `(r, z)`, if every vertex shares them.
fn uniform_degrees(g: &MixedGraph) -> Option<(usize, usize)> {
    let d = g.degrees();
    (d.undirected.min == d.undirected.max && d.out.min == d.out.max).then_some((d.undirected.max, d.out.max))
}

/// `I + A + A² = J + 2I + P` for a defect-one graph with `k = 2, r = 2`,
/// where `P` has a 1 at `(u, r(u))`.
pub fn matrix_identity_defect(g: &MixedGraph) -> Result<MatrixIdentity, CertifyError> {
    let n = g.order();
    let Some((2, z)) = uniform_degrees(g) else {
        return Err(CertifyError::Precondition("undirected degree 2 and uniform out-degree required".into()));
    };
    let bound = moore_bound(2, z as u64, 2).as_u64().unwrap_or(u64::MAX);
    if n as u64 + 1 != bound || !diameter(g).is_some_and(|d| d <= 2) {
        return Err(CertifyError::Precondition(format!(
            "not a (2,{z},2;-1)-graph: order {n}, Moore bound {bound}"
        )));
    }
    let p = IntMatrix::from_map(&repeats(g, 2)?);
    let rhs = IntMatrix::all_ones(n).add(&IntMatrix::identity(n).scale(2)).add(&p);
    Ok(compare(&walk_matrix(g), &rhs))
}

/// `I + A + A² = J + rI − O` for an excess-one, 2-geodetic graph with
/// undirected degree `r`, where `O` has a 1 at `(u, o(u))`.
pub fn matrix_identity_excess(g: &MixedGraph, r: usize) -> Result<MatrixIdentity, CertifyError> {
    let n = g.order();
    let z = match uniform_degrees(g) {
        Some((d, z)) if d == r => z,
        _ => {
            return Err(CertifyError::Precondition(format!(
                "undirected degree {r} and uniform out-degree required"
            )))
        }
    };
    let bound = moore_bound(r as u64, z as u64, 2).as_u64().unwrap_or(u64::MAX);
    if n as u64 != bound + 1 || !super::is_k_geodetic(g, 2).geodetic {
        return Err(CertifyError::Precondition(format!(
            "not a ({r},{z},2;+1)-graph: order {n}, Moore bound {bound}"
        )));
    }
    let o = IntMatrix::from_map(&outliers(g, 2)?);
    let rhs = IntMatrix::all_ones(n).add(&IntMatrix::identity(n).scale(r as i64)).sub(&o);
    Ok(compare(&walk_matrix(g), &rhs))
}
