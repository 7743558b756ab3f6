use crate::graph::MixedGraph;

/// Graphviz rendering: edges drawn without arrowheads, arcs directed.
pub fn to_dot(g: &MixedGraph) -> String {
    let mut s = String::from("digraph G {\n");
    for v in 0..g.order() {
        s.push_str(&format!("  {v};\n"));
    }
    for &(u, v) in g.edges() {
        s.push_str(&format!("  {u} -> {v} [dir=none];\n"));
    }
    for &(u, v) in g.arcs() {
        s.push_str(&format!("  {u} -> {v};\n"));
    }
    s.push_str("}\n");
    s
}
