//! The `mixedgraph v1` text format.
//!
//! ```text
//! mixedgraph v1
//! n=3
//! E 0 1      # undirected edge, lower index first
//! A 1 2      # arc 1 -> 2
//! ```
//!
//! Serialization writes the header, `n=`, the edges sorted by `(i, j)` and
//! then the arcs sorted by `(i, j)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::MixedGraph;

pub const HEADER: &str = "mixedgraph v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0:?}")]
    Malformed(String),
    #[error("missing `n=` declaration")]
    MissingOrder,
    #[error("unsupported header {0:?}")]
    BadHeader(String),
    #[error("vertex {vertex} out of range (n = {n})")]
    OutOfRange { vertex: usize, n: usize },
    #[error("edge endpoints must be ascending: E {0} {1}")]
    EdgeNotAscending(usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate element {0:?}")]
    Duplicate(String),
    #[error("edge and arc between {0} and {1}")]
    EdgeArcConflict(usize, usize),
}

/// Parse a graph file. The header line is optional; `n=` must come before
/// any element line.
pub fn parse_graph(text: &str) -> Result<MixedGraph, ParseError> {
    let mut n: Option<usize> = None;
    let mut seen_record = false;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut edge_set = BTreeSet::new();
    let mut arc_set = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |kind| ParseError { line, kind };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !seen_record && content.starts_with("mixedgraph") {
            seen_record = true;
            if content != HEADER {
                return Err(err(ParseErrorKind::BadHeader(content.to_string())));
            }
            continue;
        }
        seen_record = true;
        if let Some(value) = content.strip_prefix("n=") {
            if n.is_some() {
                return Err(err(ParseErrorKind::Malformed(content.to_string())));
            }
            let parsed = value
                .trim()
                .parse::<usize>()
                .map_err(|_| err(ParseErrorKind::Malformed(content.to_string())))?;
            n = Some(parsed);
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let (kind, i, j) = match fields.as_slice() {
            [kind @ ("E" | "A"), i, j] => {
                let i = i.parse::<usize>();
                let j = j.parse::<usize>();
                match (i, j) {
                    (Ok(i), Ok(j)) => (*kind, i, j),
                    _ => return Err(err(ParseErrorKind::Malformed(content.to_string()))),
                }
            }
            _ => return Err(err(ParseErrorKind::Malformed(content.to_string()))),
        };
        let order = n.ok_or_else(|| err(ParseErrorKind::MissingOrder))?;
        for v in [i, j] {
            if v >= order {
                return Err(err(ParseErrorKind::OutOfRange { vertex: v, n: order }));
            }
        }
        if i == j {
            return Err(err(ParseErrorKind::Loop(i)));
        }
        if kind == "E" {
            if i > j {
                return Err(err(ParseErrorKind::EdgeNotAscending(i, j)));
            }
            if arc_set.contains(&(i, j)) || arc_set.contains(&(j, i)) {
                return Err(err(ParseErrorKind::EdgeArcConflict(i, j)));
            }
            if !edge_set.insert((i, j)) {
                return Err(err(ParseErrorKind::Duplicate(content.to_string())));
            }
            edges.push((i, j));
        } else {
            if edge_set.contains(&(i.min(j), i.max(j))) {
                return Err(err(ParseErrorKind::EdgeArcConflict(i, j)));
            }
            if !arc_set.insert((i, j)) {
                return Err(err(ParseErrorKind::Duplicate(content.to_string())));
            }
            arcs.push((i, j));
        }
    }
    let n = n.ok_or(ParseError {
        line: text.lines().count().max(1),
        kind: ParseErrorKind::MissingOrder,
    })?;
    Ok(MixedGraph::new(n, edges, arcs).expect("parser validated every invariant"))
}

/// Serialize in normalized form.
pub fn to_text(g: &MixedGraph) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "n={}", g.order()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(s, "E {u} {v}").unwrap();
    }
    for &(u, v) in g.arcs() {
        writeln!(s, "A {u} {v}").unwrap();
    }
    s
}
