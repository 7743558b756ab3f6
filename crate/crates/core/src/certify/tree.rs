use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, MixedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Edge,
    Arc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEntry {
    pub vertex: usize,
    pub level: usize,
    pub parent: Option<usize>,
    pub step: Option<StepKind>,
}

/// All non-backtracking walks of length at most `k` from `root`, one entry
/// per walk, in breadth-first order. Children of a node list undirected
/// neighbours first and then out-neighbours, each in ascending order; the
/// vertex just left over an edge is skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreTree {
    pub root: usize,
    pub k: usize,
    pub entries: Vec<TreeEntry>,
    /// Vertices appearing at least twice, with their multiplicity.
    pub duplicates: BTreeMap<usize, usize>,
    /// Vertices of the host graph that never appear.
    pub missing: Vec<usize>,
}

impl MooreTree {
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k + 1];
        for e in &self.entries {
            sizes[e.level] += 1;
        }
        sizes
    }
}

pub fn moore_tree(g: &MixedGraph, root: usize, k: usize) -> Result<MooreTree, GraphError> {
    g.check_vertex(root)?;
    let mut entries = vec![TreeEntry { vertex: root, level: 0, parent: None, step: None }];
    let mut next = 0;
    while next < entries.len() {
        let TreeEntry { vertex, level, parent, step } = entries[next].clone();
        if level < k {
            let came_from = match step {
                Some(StepKind::Edge) => parent.map(|p| entries[p].vertex),
                _ => None,
            };
            for &w in g.undirected_neighbors(vertex) {
                if Some(w) != came_from {
                    entries.push(TreeEntry { vertex: w, level: level + 1, parent: Some(next), step: Some(StepKind::Edge) });
                }
            }
            for &w in g.out_neighbors(vertex) {
                entries.push(TreeEntry { vertex: w, level: level + 1, parent: Some(next), step: Some(StepKind::Arc) });
            }
        }
        next += 1;
    }
    let mut multiplicity = vec![0usize; g.order()];
    for e in &entries {
        multiplicity[e.vertex] += 1;
    }
    let duplicates = multiplicity
        .iter()
        .enumerate()
        .filter(|(_, &m)| m >= 2)
        .map(|(v, &m)| (v, m))
        .collect();
    let missing = multiplicity.iter().enumerate().filter(|(_, &m)| m == 0).map(|(v, _)| v).collect();
    Ok(MooreTree { root, k, entries, duplicates, missing })
}

/// Graphviz rendering with nodes named `u0, u1, ...` in entry order.
pub fn tree_to_dot(tree: &MooreTree) -> String {
    let mut s = String::from("digraph moore_tree {\n  node [shape=circle];\n");
    for (i, e) in tree.entries.iter().enumerate() {
        s.push_str(&format!("  u{i} [label=\"u{i}\\nv{}\"];\n", e.vertex));
    }
    for (i, e) in tree.entries.iter().enumerate() {
        if let Some(p) = e.parent {
            let style = match e.step {
                Some(StepKind::Edge) => " [dir=none]",
                _ => "",
            };
            s.push_str(&format!("  u{p} -> u{i}{style};\n"));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_of_a_tree_has_no_duplicates() {
        // out-regular depth-2 tree with r = 0, z = 2 rooted at 0
        let g = MixedGraph::new(7, [], [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        let t = moore_tree(&g, 0, 2).unwrap();
        assert!(t.duplicates.is_empty() && t.missing.is_empty());
        assert_eq!(t.level_sizes(), vec![1, 2, 4]);
    }

    #[test]
    fn child_order_edges_first() {
        let g = MixedGraph::new(4, [(0, 3), (0, 2)], [(0, 1)]).unwrap();
        let t = moore_tree(&g, 0, 1).unwrap();
        let order: Vec<usize> = t.entries.iter().map(|e| e.vertex).collect();
        assert_eq!(order, vec![0, 2, 3, 1]);
        assert!(tree_to_dot(&t).contains("u0 -> u1 [dir=none]"));
        assert!(tree_to_dot(&t).contains("u0 -> u3;"));
    }
}
