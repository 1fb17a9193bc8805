use std::fmt::Write;

use hdakit_core::precubical::Hda;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// 0-cells as nodes, 1-cells as labelled edges, 2-cells as shaded clusters with a
/// plaintext node listing their boundary. Higher cells appear as comments.
pub fn export_dot(h: &Hda) -> String {
    let x = &h.complex;
    let mut out = String::from("digraph hda {\n  rankdir=LR;\n");
    for r in x.cell_refs().filter(|&r| x.cell_dim(r) == 0) {
        let shape = if r == h.initial { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(x.id(r))).unwrap();
    }
    for r in x.cell_refs().filter(|&r| x.cell_dim(r) == 1) {
        let c = x.cell(r);
        writeln!(
            out,
            "  {} -> {} [label={}, tooltip={}];",
            quote(x.id(c.d0[0])),
            quote(x.id(c.d1[0])),
            quote(c.labels.label(1).as_str()),
            quote(&c.id)
        )
        .unwrap();
    }
    for r in x.cell_refs().filter(|&r| x.cell_dim(r) >= 2) {
        let c = x.cell(r);
        let labels: Vec<&str> = c.labels.labels().iter().map(|l| l.as_str()).collect();
        let faces = |fs: &[hdakit_core::precubical::CellRef]| fs.iter().map(|&f| x.id(f)).collect::<Vec<_>>().join(" ");
        let summary = format!("{} ({})\\nd0: {}\\nd1: {}", c.id, labels.join(","), faces(&c.d0), faces(&c.d1));
        if c.labels.arity() == 2 {
            writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{}", c.id))).unwrap();
            writeln!(out, "    style=filled; fillcolor=lightgrey; label={};", quote(&c.id)).unwrap();
            writeln!(out, "    {} [shape=plaintext, label=\"{summary}\"];", quote(&format!("cell {}", c.id))).unwrap();
            writeln!(out, "  }}").unwrap();
        } else {
            writeln!(out, "  // {summary}").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
