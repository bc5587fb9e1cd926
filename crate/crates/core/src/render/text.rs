//! Plain listing of boxes and wires, one line each.

use std::fmt::Write;

use super::{wire_ends, RenderOptions};
use crate::diagram::OpenHypergraph;

fn wires(h: &OpenHypergraph, ws: &[usize]) -> String {
    if ws.is_empty() {
        return "I".into();
    }
    ws.iter()
        .map(|&w| format!("w{w}:{}", h.wires[w]))
        .collect::<Vec<_>>()
        .join(" ⊗ ")
}

pub fn render_text(h: &OpenHypergraph, opts: &RenderOptions) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "inputs:  {}", wires(h, &h.inputs));
    for (b, bx) in h.boxes.iter().enumerate() {
        let _ = writeln!(
            s,
            "b{b} {}: {} -> {}",
            bx.sig.label(opts.ascii),
            wires(h, &bx.inputs),
            wires(h, &bx.outputs)
        );
    }
    let _ = writeln!(s, "outputs: {}", wires(h, &h.outputs));
    for (w, ends) in wire_ends(h).iter().enumerate() {
        if ends.len() != 2 {
            let _ = writeln!(s, "w{w} {} has degree {}", h.wires[w], ends.len());
        }
    }
    s
}
