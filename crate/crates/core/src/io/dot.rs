use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::io::write_file;
use crate::projection::CoPreferenceGraph;

/// Community fill colors; label `c` uses `PALETTE[c % 32]`.
pub const PALETTE: [&str; 32] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
    "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5", "#393b79", "#637939", "#8c6d31", "#843c39",
    "#7b4173", "#5254a3", "#8ca252", "#bd9e39", "#ad494a", "#a55194", "#6b6ecf", "#b5cf6b",
];

fn quoted(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Undirected DOT drawing; nodes are filled by community and edge pen
/// width grows with weight.
pub fn write_dot_to<W: Write>(
    w: &mut W,
    graph: &CoPreferenceGraph,
    partition: &Partition,
) -> std::io::Result<()> {
    writeln!(w, "graph communities {{")?;
    writeln!(w, "  node [style=filled, shape=ellipse, fontsize=10];")?;
    let canon = partition.canonical();
    for (i, id) in graph.items().iter().enumerate() {
        let label = graph.name(i).unwrap_or(id);
        let c = canon.label(i);
        writeln!(
            w,
            "  {} [label={}, community={c}, fillcolor={}];",
            quoted(id),
            quoted(label),
            quoted(PALETTE[c % PALETTE.len()])
        )?;
    }
    let max = graph.edges().iter().map(|e| e.weight).fold(0.0, f64::max);
    for e in graph.edges() {
        let pen = if max > 0.0 {
            0.5 + 3.5 * e.weight / max
        } else {
            1.0
        };
        writeln!(
            w,
            "  {} -- {} [penwidth={pen:.3}];",
            quoted(&graph.items()[e.a]),
            quoted(&graph.items()[e.b])
        )?;
    }
    writeln!(w, "}}")
}

pub fn write_dot(
    graph: &CoPreferenceGraph,
    partition: &Partition,
    path: impl AsRef<Path>,
) -> Result<()> {
    if partition.len() != graph.item_count() {
        return Err(Error::PartitionMismatch {
            expected: graph.item_count(),
            found: partition.len(),
        });
    }
    write_file(path.as_ref(), |w| write_dot_to(w, graph, partition))
}
