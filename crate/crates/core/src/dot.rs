//! Graphviz rendering of an instance: one node per cell, grouped and
//! colored by how many steps the cell survives, cover pairs as edges.

use crate::filtration::ViabilityReport;
use crate::space::Space;

const LAYER_COLORS: [&str; 8] = [
    "#d9e8f5", "#a6cbe8", "#74afdb", "#4292c6", "#2171b5", "#08519c", "#083a7a", "#062b5c",
];
const CORE_COLOR: &str = "#f4a582";

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn dot_graph(space: &Space, viability: &ViabilityReport) -> String {
    let mut out = String::from("digraph filtration {\n");
    out.push_str("  rankdir=BT;\n  node [shape=box, style=filled];\n");
    for (n, layer) in viability.layers.iter().enumerate() {
        if layer.is_empty() {
            continue;
        }
        let color = LAYER_COLORS[n % LAYER_COLORS.len()];
        let dark = n % LAYER_COLORS.len() >= 5;
        out.push_str(&format!("  subgraph cluster_A{n} {{\n    label=\"A{n}\";\n"));
        for x in layer.iter() {
            out.push_str(&format!(
                "    {} [fillcolor=\"{color}\"{}];\n",
                quote(space.name(x)),
                if dark { ", fontcolor=\"white\"" } else { "" }
            ));
        }
        out.push_str("  }\n");
    }
    let core = viability.core();
    if !core.is_empty() {
        out.push_str("  subgraph cluster_core {\n    label=\"core\";\n");
        for x in core.iter() {
            out.push_str(&format!(
                "    {} [fillcolor=\"{CORE_COLOR}\"];\n",
                quote(space.name(x))
            ));
        }
        out.push_str("  }\n");
    }
    for &(face, cell) in space.covers() {
        out.push_str(&format!(
            "  {} -> {};\n",
            quote(space.name(face)),
            quote(space.name(cell))
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::viability_sequence;
    use crate::gallery::{build_example, gallery_names};

    #[test]
    fn every_cell_once_and_braces_balance() {
        for name in gallery_names() {
            let inst = build_example(name).unwrap();
            let report = viability_sequence(&inst.c, &inst.dynamics).unwrap();
            let dot = dot_graph(&inst.space, &report);
            assert_eq!(
                dot.matches('{').count(),
                dot.matches('}').count(),
                "braces in {name}"
            );
            for x in inst.space.cells() {
                let node = format!("{} [fillcolor=", quote(inst.space.name(x)));
                assert_eq!(
                    dot.matches(&node).count(),
                    1,
                    "cell {} in {name}",
                    inst.space.name(x)
                );
            }
            let edges = dot.matches(" -> ").count();
            assert_eq!(edges, inst.space.covers().len(), "edges in {name}");
        }
    }

    #[test]
    fn names_with_quotes_are_escaped() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
        assert_eq!(quote("a\\b"), "\"a\\\\b\"");
    }
}
