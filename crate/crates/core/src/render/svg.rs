//! A small layered SVG layout: boxes sit in columns by dependency depth and
//! wires are drawn as orthogonal polylines. Wires of degree other than 2 meet
//! at a dot, filled when it is a real join or copy.

use std::fmt::Write;

use super::{wire_ends, wire_label, xml_escape, End, RankDir, RenderOptions};
use crate::diagram::OpenHypergraph;

const MARGIN: f64 = 24.0;
const COL: f64 = 200.0;
const BOX_W: f64 = 120.0;
const PORT_GAP: f64 = 22.0;
const ROW_GAP: f64 = 28.0;
const ANCHOR_GAP: f64 = 30.0;

/// Column of each box: one past the deepest box feeding it. Feedback through
/// cups and caps is possible, so the relaxation is capped.
fn layers(h: &OpenHypergraph) -> Vec<usize> {
    let n = h.boxes.len();
    let mut producers = vec![Vec::new(); h.wires.len()];
    for (b, bx) in h.boxes.iter().enumerate() {
        for &w in &bx.outputs {
            producers[w].push(b);
        }
    }
    let mut layer = vec![0usize; n];
    for _ in 0..n {
        let mut changed = false;
        for (b, bx) in h.boxes.iter().enumerate() {
            for &w in &bx.inputs {
                for &p in &producers[w] {
                    if p != b && layer[p] + 1 > layer[b] && layer[p] < n {
                        layer[b] = layer[p] + 1;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    layer
}

struct Geometry {
    rects: Vec<(f64, f64, f64, f64)>,
    out_x: f64,
    height: f64,
}

fn box_height(inputs: usize, outputs: usize) -> f64 {
    inputs.max(outputs).max(1) as f64 * PORT_GAP + 14.0
}

fn layout(h: &OpenHypergraph) -> Geometry {
    let layer = layers(h);
    let cols = layer.iter().max().map_or(0, |m| m + 1);
    let mut next_y = vec![MARGIN; cols];
    let mut rects = Vec::with_capacity(h.boxes.len());
    for (b, bx) in h.boxes.iter().enumerate() {
        let x = MARGIN + 80.0 + layer[b] as f64 * COL;
        let ht = box_height(bx.inputs.len(), bx.outputs.len());
        let y = next_y[layer[b]];
        next_y[layer[b]] += ht + ROW_GAP;
        rects.push((x, y, BOX_W, ht));
    }
    let out_x = MARGIN + 80.0 + cols as f64 * COL;
    let anchors = h.inputs.len().max(h.outputs.len()) as f64 * ANCHOR_GAP;
    let height = next_y.iter().cloned().fold(MARGIN + anchors, f64::max) + MARGIN;
    Geometry { rects, out_x, height }
}

fn point(g: &Geometry, h: &OpenHypergraph, e: End) -> (f64, f64) {
    match e {
        End::Input(i) => (MARGIN, MARGIN + 10.0 + i as f64 * ANCHOR_GAP),
        End::Output(i) => (g.out_x, MARGIN + 10.0 + i as f64 * ANCHOR_GAP),
        End::BoxIn(b, k) => {
            let (x, y, _, ht) = g.rects[b];
            let n = h.boxes[b].inputs.len() as f64;
            (x, y + ht * (k as f64 + 1.0) / (n + 1.0))
        }
        End::BoxOut(b, k) => {
            let (x, y, w, ht) = g.rects[b];
            let n = h.boxes[b].outputs.len() as f64;
            (x + w, y + ht * (k as f64 + 1.0) / (n + 1.0))
        }
    }
}

/// Orthogonal route from `a` to `b` with the vertical run halfway across.
fn route(a: (f64, f64), b: (f64, f64)) -> Vec<(f64, f64)> {
    let mx = (a.0 + b.0) / 2.0;
    vec![a, (mx, a.1), (mx, b.1), b]
}

pub fn render_svg(h: &OpenHypergraph, opts: &RenderOptions) -> String {
    let g = layout(h);
    let tb = opts.rank_dir == RankDir::TopToBottom;
    let tr = |(x, y): (f64, f64)| if tb { (y, x) } else { (x, y) };
    let (mut width, mut height) = (g.out_x + 160.0, g.height);
    if tb {
        std::mem::swap(&mut width, &mut height);
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="Helvetica, Arial, sans-serif" font-size="11">"#
    );

    let polyline = |s: &mut String, pts: Vec<(f64, f64)>| {
        let d: Vec<String> = pts
            .into_iter()
            .map(tr)
            .map(|(x, y)| format!("{x:.1},{y:.1}"))
            .collect();
        let _ = writeln!(
            s,
            r#"  <polyline points="{}" fill="none" stroke="black"/>"#,
            d.join(" ")
        );
    };

    for (w, ends) in wire_ends(h).iter().enumerate() {
        let pts: Vec<(f64, f64)> = ends.iter().map(|&e| point(&g, h, e)).collect();
        let label = xml_escape(&wire_label(&h.wires[w], opts.show_roles));
        if let Some(&first) = pts.first() {
            let (lx, ly) = tr((first.0 + 6.0, first.1 - 4.0));
            let _ = writeln!(s, r#"  <text x="{lx:.1}" y="{ly:.1}">{label}</text>"#);
        }
        if pts.len() == 2 {
            polyline(&mut s, route(pts[0], pts[1]));
            continue;
        }
        let src: Vec<_> = ends.iter().zip(&pts).filter(|(e, _)| e.is_source()).map(|(_, p)| p.0).collect();
        let dst: Vec<_> = ends.iter().zip(&pts).filter(|(e, _)| !e.is_source()).map(|(_, p)| p.0).collect();
        let hx = match (
            src.iter().cloned().reduce(f64::max),
            dst.iter().cloned().reduce(f64::min),
        ) {
            (Some(a), Some(b)) => (a + b) / 2.0,
            (Some(a), None) => a + 30.0,
            (None, Some(b)) => b - 30.0,
            (None, None) => MARGIN + 40.0,
        };
        let hy = if pts.is_empty() {
            g.height - MARGIN
        } else {
            pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64
        };
        for &p in &pts {
            polyline(&mut s, vec![p, (hx, p.1), (hx, hy)]);
        }
        let (cx, cy) = tr((hx, hy));
        let fill = if pts.len() >= 3 { "black" } else { "white" };
        let _ = writeln!(
            s,
            r#"  <circle cx="{cx:.1}" cy="{cy:.1}" r="4" fill="{fill}" stroke="black"/>"#
        );
    }

    for (b, bx) in h.boxes.iter().enumerate() {
        let (x, y, w, ht) = g.rects[b];
        let (rx, ry) = tr((x, y));
        let (rw, rh) = if tb { (ht, w) } else { (w, ht) };
        let (cx, cy) = tr((x + w / 2.0, y + ht / 2.0));
        let _ = writeln!(
            s,
            r#"  <rect x="{rx:.1}" y="{ry:.1}" width="{rw:.1}" height="{rh:.1}" fill="white" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"  <text x="{cx:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#,
            cy + 4.0,
            xml_escape(&bx.sig.label(opts.ascii))
        );
    }
    s.push_str("</svg>\n");
    s
}
