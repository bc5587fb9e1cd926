//! Graphviz output.
//!
//! Conventions: boxes are record nodes `b<i>` with one field per port,
//! labelled `∩NPi`, `∪NPi` or the modality. Boundary anchors are `in<i>` and
//! `out<i>`, pinned to the source and sink ranks. A wire of degree 3 or more
//! becomes a filled point `w<j>`.
//! A wire of degree 2 is a single edge; a wire of degree 0 or 1 becomes a
//! hollow point so it stays visible.

use std::fmt::Write;

use super::{wire_ends, wire_label, xml_escape, End, RankDir, RenderOptions};
use crate::diagram::OpenHypergraph;

fn node(e: End) -> String {
    match e {
        End::Input(i) => format!("in{i}"),
        End::Output(i) => format!("out{i}"),
        End::BoxIn(b, _) | End::BoxOut(b, _) => format!("b{b}"),
    }
}

/// Port suffix so parallel edges into one box keep their order.
fn port(e: End, tail: bool) -> String {
    match e {
        End::BoxOut(_, k) if tail => format!(", tailport=o{k}"),
        End::BoxIn(_, k) if !tail => format!(", headport=i{k}"),
        _ => String::new(),
    }
}

fn label(h: &OpenHypergraph, w: usize, opts: &RenderOptions) -> String {
    let a = &h.wires[w];
    if opts.show_roles {
        format!(
            "<{}<SUB>{}</SUB>>",
            xml_escape(&a.entity),
            a.role.abbreviation()
        )
    } else {
        format!("\"{}\"", wire_label(a, false).replace('"', "\\\""))
    }
}

/// Record label `{{<i0>|..}|name|{<o0>|..}}`. The outer braces flip the
/// record across the rank direction, so ports face their neighbours in both
/// LR and TB layouts.
fn box_label(h: &OpenHypergraph, b: usize, opts: &RenderOptions) -> String {
    let bx = &h.boxes[b];
    let mut name = String::new();
    for c in bx.sig.label(opts.ascii).chars() {
        if matches!(c, '{' | '}' | '|' | '<' | '>' | '"' | '\\') {
            name.push('\\');
        }
        name.push(c);
    }
    let mut fields = Vec::new();
    if !bx.inputs.is_empty() {
        let ports: Vec<String> = (0..bx.inputs.len()).map(|k| format!("<i{k}>")).collect();
        fields.push(format!("{{{}}}", ports.join("|")));
    }
    fields.push(name);
    if !bx.outputs.is_empty() {
        let ports: Vec<String> = (0..bx.outputs.len()).map(|k| format!("<o{k}>")).collect();
        fields.push(format!("{{{}}}", ports.join("|")));
    }
    format!("{{{}}}", fields.join("|"))
}

pub fn render_dot(h: &OpenHypergraph, opts: &RenderOptions) -> String {
    let mut s = String::new();
    s.push_str("digraph diagram {\n");
    let rankdir = match opts.rank_dir {
        RankDir::LeftToRight => "LR",
        RankDir::TopToBottom => "TB",
    };
    let _ = writeln!(s, "  rankdir={rankdir};");
    s.push_str("  node [fontname=\"Helvetica\"];\n");
    s.push_str("  edge [fontname=\"Helvetica\", fontsize=10, arrowsize=0.6];\n");

    if !h.inputs.is_empty() {
        s.push_str("  { rank=source;");
        for i in 0..h.inputs.len() {
            let _ = write!(s, " in{i} [shape=none, label=\"\", width=0, height=0];");
        }
        s.push_str(" }\n");
    }
    if !h.outputs.is_empty() {
        s.push_str("  { rank=sink;");
        for i in 0..h.outputs.len() {
            let _ = write!(s, " out{i} [shape=none, label=\"\", width=0, height=0];");
        }
        s.push_str(" }\n");
    }
    for b in 0..h.boxes.len() {
        let _ = writeln!(
            s,
            "  b{b} [shape=record, label=\"{}\"];",
            box_label(h, b, opts)
        );
    }

    let ends = wire_ends(h);
    let mut edges = Vec::new();
    for (w, ends) in ends.iter().enumerate() {
        let lab = label(h, w, opts);
        if ends.len() == 2 {
            // Sources sort first, so this runs producer to consumer when
            // there is one of each.
            let (a, b) = (ends[0], ends[1]);
            edges.push(format!(
                "  {} -> {} [label={lab}{}{}];",
                node(a),
                node(b),
                port(a, true),
                port(b, false)
            ));
            continue;
        }
        let style = if ends.len() >= 3 {
            "style=filled, fillcolor=black, width=0.1"
        } else {
            "style=solid, fillcolor=white, width=0.1"
        };
        let _ = writeln!(s, "  w{w} [shape=point, {style}];");
        for &e in ends {
            if e.is_source() {
                edges.push(format!(
                    "  {} -> w{w} [label={lab}, arrowhead=none{}];",
                    node(e),
                    port(e, true)
                ));
            } else {
                edges.push(format!(
                    "  w{w} -> {} [label={lab}{}];",
                    node(e),
                    port(e, false)
                ));
            }
        }
    }
    for e in edges {
        s.push_str(&e);
        s.push('\n');
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{evaluate, GeneratorSig, MorphismTerm, TensorWord};

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn empty_diagram_has_no_nodes() {
        let dot = render_dot(&evaluate(&MorphismTerm::Id(TensorWord::unit())), &RenderOptions::default());
        assert_eq!(count(&dot, "shape="), 0);
        assert_eq!(count(&dot, "->"), 0);
    }

    #[test]
    fn copy_becomes_a_filled_point() {
        let t = MorphismTerm::Copy(crate::narrative::Actant::lit("Hare_SubjectDoing"));
        let dot = render_dot(&evaluate(&t), &RenderOptions::default());
        assert_eq!(count(&dot, "fillcolor=black"), 1);
        assert_eq!(count(&dot, "->"), 3);
    }

    #[test]
    fn role_subscripts() {
        let g = GeneratorSig::plain("f", TensorWord::lit(&["Hare_SubjectDoing"]), TensorWord::unit());
        let h = evaluate(&MorphismTerm::gen(g));
        let plain = render_dot(&h, &RenderOptions::default());
        assert!(plain.contains("label=\"Hare\""));
        let roles = render_dot(&h, &RenderOptions { show_roles: true, ..Default::default() });
        assert!(roles.contains("label=<Hare<SUB>SD</SUB>>"));
    }
}
