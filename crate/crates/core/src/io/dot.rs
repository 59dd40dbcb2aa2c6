use std::fmt::Write;

use crate::graph::{LayerPartition, PropagationGraph};

/// Node fill per layer: dark blue, blue, light blue, yellow, orange, red,
/// then cycling.
pub const LAYER_COLORS: [&str; 8] = [
    "#08306b", "#2171b5", "#9ecae1", "#ffe066", "#fd8d3c", "#d7301f", "#7f2704", "#6a51a3",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph with nodes ranked and coloured by layer and edge width
/// growing with the delay value.
pub fn to_dot(ids: &[String], g: &PropagationGraph, layers: &LayerPartition) -> String {
    let mut out = String::from("digraph propagation {\n  rankdir=LR;\n  node [shape=circle, style=filled, fontname=\"Helvetica\"];\n");
    for (k, members) in layers.layers.iter().enumerate() {
        let color = LAYER_COLORS[k % LAYER_COLORS.len()];
        let font = if k < 2 { "white" } else { "black" };
        let _ = writeln!(out, "  subgraph layer_{k} {{\n    rank=same;");
        for &v in members {
            let _ = writeln!(
                out,
                "    {} [fillcolor=\"{color}\", fontcolor={font}, tooltip=\"layer {k}\"];",
                quote(&ids[v])
            );
        }
        out.push_str("  }\n");
    }
    let max = g.edges().map(|e| e.ad).fold(0.0_f64, f64::max);
    for e in g.edges() {
        let width = if max > 0.0 { 1.0 + 4.0 * e.ad / max } else { 1.0 };
        let _ = writeln!(
            out,
            "  {} -> {} [penwidth={width:.3}, label=\"{:.3}\"];",
            quote(&ids[e.src]),
            quote(&ids[e.dst]),
            e.ad
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn widths_scale_with_delay() {
        let ids: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let g = PropagationGraph::from_edges(
            3,
            [
                Edge { src: 0, dst: 1, ad: 10.0 },
                Edge { src: 1, dst: 2, ad: 5.0 },
            ],
        );
        let dot = to_dot(&ids, &g, &LayerPartition::from_layer_of(vec![0, 1, 2]));
        assert!(dot.contains("\"a\" -> \"b\" [penwidth=5.000"));
        assert!(dot.contains("\"b\" -> \"c\" [penwidth=3.000"));
        assert!(dot.contains("#08306b"));
        assert!(dot.trim_end().ends_with('}'));
    }
}
