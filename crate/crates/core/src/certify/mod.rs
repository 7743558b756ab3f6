//! Certificates for concrete graphs: geodecity, diameter, defect and excess,
//! Moore trees, repeats, outliers, the deficiency sets S and S′, total
//! regularity, exact matrix identities and structural audits.

mod audit;
mod matrix;
mod report;
mod tree;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, MixedGraph};
use crate::walks::WalkCounter;

pub use audit::{structure_audit, AuditCheck, AuditOutcome};
pub use matrix::{
    matrix_identity_defect, matrix_identity_excess, walk_matrix, IntMatrix, MatrixIdentity, Mismatch,
};
pub use report::{check_graph, classify, CheckReport, Classification};
pub use tree::{moore_tree, tree_to_dot, MooreTree, StepKind, TreeEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Defect,
    Excess,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "defect" => Ok(Mode::Defect),
            "excess" => Ok(Mode::Excess),
            other => Err(format!("unknown mode {other:?} (expected defect or excess)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Defect => "defect",
            Mode::Excess => "excess",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeViolation {
    pub vertex: usize,
    pub undirected: usize,
    pub out: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("degree bounds violated at {} vertices (first: vertex {})", .0.len(), .0[0].vertex)]
    DegreeBound(Vec<DegreeViolation>),
    #[error("not defect-one: Moore tree at root {root} has duplicates {duplicates:?}")]
    NotDefectOne { root: usize, duplicates: Vec<(usize, usize)> },
    #[error("not excess-one: Moore tree at root {root} misses {missing:?}")]
    NotExcessOne { root: usize, missing: Vec<usize> },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A pair with too many short mixed paths, or a short closed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodecityViolation {
    pub from: usize,
    pub to: usize,
    pub walks: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodecityVerdict {
    pub geodetic: bool,
    pub violation: Option<GeodecityViolation>,
}

/// At most one non-backtracking walk of length `1..=k` between distinct
/// vertices and none from a vertex back to itself.
pub fn is_k_geodetic(g: &MixedGraph, k: usize) -> GeodecityVerdict {
    let mut counter = WalkCounter::new(g);
    let mut counts = vec![0u128; g.order()];
    for u in 0..g.order() {
        counter.count_from(g, u, k, &mut counts, None);
        for (v, &c) in counts.iter().enumerate() {
            let limit = if v == u { 0 } else { 1 };
            if c > limit {
                return GeodecityVerdict {
                    geodetic: false,
                    violation: Some(GeodecityViolation { from: u, to: v, walks: c }),
                };
            }
        }
    }
    GeodecityVerdict { geodetic: true, violation: None }
}

/// The repeat map `u ↦ r(u)`: the unique vertex appearing twice in the
/// Moore tree of depth `k` at `u`.
pub fn repeats(g: &MixedGraph, k: usize) -> Result<Vec<usize>, CertifyError> {
    (0..g.order())
        .map(|u| {
            let tree = moore_tree(g, u, k)?;
            match tree.duplicates.iter().collect::<Vec<_>>().as_slice() {
                [(&v, &2)] => Ok(v),
                other => Err(CertifyError::NotDefectOne {
                    root: u,
                    duplicates: other.iter().map(|(&v, &m)| (v, m)).collect(),
                }),
            }
        })
        .collect()
}

/// The outlier map `u ↦ o(u)`: the unique vertex missing from the Moore
/// tree of depth `k` at `u`.
pub fn outliers(g: &MixedGraph, k: usize) -> Result<Vec<usize>, CertifyError> {
    (0..g.order())
        .map(|u| {
            let tree = moore_tree(g, u, k)?;
            match tree.missing.as_slice() {
                [o] => {
                    assert_ne!(*o, u, "a root always reaches itself");
                    Ok(*o)
                }
                other => Err(CertifyError::NotExcessOne { root: u, missing: other.to_vec() }),
            }
        })
        .collect()
}

/// `S = {v : d⁻(v) < z}` and `S′ = {v : d⁻(v) > z}`.
pub fn deficiency_sets(g: &MixedGraph, z: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut s = BTreeSet::new();
    let mut s_prime = BTreeSet::new();
    for v in 0..g.order() {
        let d = g.in_neighbors(v).len();
        if d < z {
            s.insert(v);
        } else if d > z {
            s_prime.insert(v);
        }
    }
    (s, s_prime)
}

/// Every vertex has `d(u) = r` and `d⁺(u) = d⁻(u) = z`.
pub fn total_regularity(g: &MixedGraph, r: usize, z: usize) -> bool {
    (0..g.order()).all(|u| {
        g.undirected_neighbors(u).len() == r && g.out_neighbors(u).len() == z && g.in_neighbors(u).len() == z
    })
}

/// Whether `perm` maps edges to edges, arcs to arcs (and so non-adjacent
/// pairs to non-adjacent pairs, by counting).
pub fn is_automorphism(g: &MixedGraph, perm: &[usize]) -> bool {
    perm.len() == g.order()
        && g.edges().iter().all(|&(u, v)| g.has_edge(perm[u], perm[v]))
        && g.arcs().iter().all(|&(u, v)| g.has_arc(perm[u], perm[v]))
        && {
            let mut seen = vec![false; perm.len()];
            perm.iter().all(|&p| p < seen.len() && !std::mem::replace(&mut seen[p], true))
        }
}
