//! Graphviz export of pp-trees: the `E`-tree with each node labelled by the
//! symbols whose tuples end there.

use std::fmt::Write;

use ppml_core::structure::last_k;
use ppml_core::PpTree;

pub fn tree_to_dot(t: &PpTree) -> String {
    let mut out = String::from("digraph pptree {\n  rankdir=TB;\n  node [shape=circle];\n");
    for v in 0..t.node_count() {
        let chain = t.root_chain(v);
        let mut marks: Vec<&str> = Vec::new();
        for (symbol, arity) in t.structure().signature().sigma_bar() {
            if arity <= chain.len() && t.structure().holds(symbol, last_k(&chain, arity)) {
                marks.push(symbol);
            }
        }
        let label = if marks.is_empty() {
            v.to_string()
        } else {
            format!("{v}: {}", marks.join(","))
        };
        writeln!(out, "  n{v} [label=\"{label}\"];").expect("writing to string");
    }
    for v in 0..t.node_count() {
        if let Some(p) = t.parent(v) {
            writeln!(out, "  n{p} -> n{v};").expect("writing to string");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ppml_core::comonad::unravel;
    use ppml_core::fixtures::example_a;

    #[test]
    fn dot_lists_nodes_edges_and_marks() {
        let u = unravel(&example_a(), 2);
        let dot = tree_to_dot(u.tree());
        assert_eq!(dot.matches("->").count(), 4);
        assert_eq!(dot.matches(": S").count(), 2);
        assert!(dot.starts_with("digraph"));
    }
}
