//! DOT rendering of system digraphs.

use sfselect_core::{EdgeKind, SystemDigraph};
use std::fmt::Write as _;

/// Renders the digraph as DOT text. With `closed_loop` the full vertex set
/// appears (states as circles, inputs as boxes, outputs as diamonds) and
/// feedback edges are drawn red; otherwise only the states and their
/// dynamics edges. Output is byte-deterministic: vertices in x, u, y order
/// and edges in ascending vertex order.
pub fn export_dot(sd: &SystemDigraph, closed_loop: bool) -> String {
    let mut out = String::new();
    out.push_str("digraph system {\n  rankdir=LR;\n");
    for i in 0..sd.state_count() {
        let _ = writeln!(out, "  x{} [shape=circle];", i + 1);
    }
    if closed_loop {
        for j in 0..sd.input_count() {
            let _ = writeln!(out, "  u{} [shape=box];", j + 1);
        }
        for j in 0..sd.output_count() {
            let _ = writeln!(out, "  y{} [shape=diamond];", j + 1);
        }
    }
    for (from, to) in sd.graph().edges() {
        let kind = sd.edge_kind(from, to);
        if closed_loop {
            let style = if kind == EdgeKind::Feedback {
                " [color=red]"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  {} -> {}{};",
                sd.vertex_name(from),
                sd.vertex_name(to),
                style
            );
        } else if kind == EdgeKind::Dynamics {
            let _ = writeln!(out, "  {} -> {};", sd.vertex_name(from), sd.vertex_name(to));
        }
    }
    out.push_str("}\n");
    out
}
