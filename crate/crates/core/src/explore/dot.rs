use std::fmt::Write;

use crate::model::Network;

use super::{SearchGraph, Semantics, Status};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// GraphViz rendering: one node per graph node labelled with its state and
/// zone constraints; covered nodes are dashed and point to their coverer.
pub fn export_dot<S: Semantics>(net: &Network, sem: &S, graph: &SearchGraph<S::Zone>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(&net.name)).unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    for (id, node) in graph.nodes.iter().enumerate() {
        let mut lines = vec![net.state_label(&node.q)];
        lines.extend(sem.describe(&node.zone));
        let label: Vec<String> = lines.iter().map(|l| escape(l)).collect();
        let style = match node.status {
            Status::Uncovered => "solid",
            Status::CoveredBy(_) => "dashed",
        };
        writeln!(out, "  n{id} [label=\"{}\", style={style}];", label.join("\\n")).unwrap();
    }
    for (id, node) in graph.nodes.iter().enumerate() {
        for (mv, child) in &node.children {
            writeln!(out, "  n{id} -> n{child} [label=\"{}\"];", escape(&net.move_label(mv))).unwrap();
        }
        if let Status::CoveredBy(c) = node.status {
            writeln!(out, "  n{id} -> n{c} [style=dashed, label=\"covered-by\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
