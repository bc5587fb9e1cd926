use std::collections::HashMap;

use super::OpenHypergraph;

/// A boundary-preserving isomorphism: box `i` of the left graph maps to box
/// `boxes[i]` of the right one, and likewise for wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub boxes: Vec<usize>,
    pub wires: Vec<usize>,
}

/// Decide whether two open hypergraphs are isomorphic as labelled graphs with
/// fixed boundary order. Candidates are tried in index order, so the witness
/// returned is the lexicographically first one for the search order.
pub fn iso_check(a: &OpenHypergraph, b: &OpenHypergraph) -> Option<IsoWitness> {
    if a.boxes.len() != b.boxes.len()
        || a.wires.len() != b.wires.len()
        || a.inputs.len() != b.inputs.len()
        || a.outputs.len() != b.outputs.len()
    {
        return None;
    }
    let mut sigs_a: Vec<_> = a.boxes.iter().map(|x| x.sig.as_ref()).collect();
    let mut sigs_b: Vec<_> = b.boxes.iter().map(|x| x.sig.as_ref()).collect();
    sigs_a.sort();
    sigs_b.sort();
    if sigs_a != sigs_b {
        return None;
    }

    let mut s = Search {
        a,
        b,
        deg_a: a.degrees(),
        deg_b: b.degrees(),
        wire_ab: vec![None; a.wires.len()],
        wire_ba: vec![None; b.wires.len()],
        box_ab: vec![None; a.boxes.len()],
        box_used: vec![false; b.boxes.len()],
    };
    for (&wa, &wb) in a.inputs.iter().zip(&b.inputs).chain(a.outputs.iter().zip(&b.outputs)) {
        if !s.bind(wa, wb, &mut Vec::new()) {
            return None;
        }
    }
    let order = search_order(a);
    if !s.place(&order, 0) {
        return None;
    }
    if !s.match_loose_wires() {
        return None;
    }
    Some(IsoWitness {
        boxes: s.box_ab.iter().map(|m| m.expect("all boxes placed")).collect(),
        wires: s.wire_ab.iter().map(|m| m.expect("all wires placed")).collect(),
    })
}

/// Boxes in an order where each one shares as many wires as possible with
/// boxes or boundary already visited, so constraints bite early.
fn search_order(g: &OpenHypergraph) -> Vec<usize> {
    let mut known = vec![false; g.wires.len()];
    for &w in g.inputs.iter().chain(&g.outputs) {
        known[w] = true;
    }
    let mut done = vec![false; g.boxes.len()];
    let mut order = Vec::with_capacity(g.boxes.len());
    for _ in 0..g.boxes.len() {
        let score = |i: usize| {
            let b = &g.boxes[i];
            b.inputs.iter().chain(&b.outputs).filter(|&&w| known[w]).count()
        };
        let next = (0..g.boxes.len())
            .filter(|&i| !done[i])
            .max_by(|&x, &y| score(x).cmp(&score(y)).then(y.cmp(&x)))
            .expect("a box remains");
        done[next] = true;
        let b = &g.boxes[next];
        for &w in b.inputs.iter().chain(&b.outputs) {
            known[w] = true;
        }
        order.push(next);
    }
    order
}

struct Search<'g> {
    a: &'g OpenHypergraph,
    b: &'g OpenHypergraph,
    deg_a: Vec<usize>,
    deg_b: Vec<usize>,
    wire_ab: Vec<Option<usize>>,
    wire_ba: Vec<Option<usize>>,
    box_ab: Vec<Option<usize>>,
    box_used: Vec<bool>,
}

impl Search<'_> {
    /// Map wire `wa` to `wb`, recording new bindings in `trail`.
    fn bind(&mut self, wa: usize, wb: usize, trail: &mut Vec<usize>) -> bool {
        match (self.wire_ab[wa], self.wire_ba[wb]) {
            (Some(x), _) => x == wb,
            (None, Some(_)) => false,
            (None, None) => {
                if self.a.wires[wa] != self.b.wires[wb] || self.deg_a[wa] != self.deg_b[wb] {
                    return false;
                }
                self.wire_ab[wa] = Some(wb);
                self.wire_ba[wb] = Some(wa);
                trail.push(wa);
                true
            }
        }
    }

    fn unbind(&mut self, trail: &[usize]) {
        for &wa in trail {
            if let Some(wb) = self.wire_ab[wa].take() {
                self.wire_ba[wb] = None;
            }
        }
    }

    fn place(&mut self, order: &[usize], k: usize) -> bool {
        let Some(&ia) = order.get(k) else {
            return true;
        };
        let box_a = &self.a.boxes[ia];
        for ib in 0..self.b.boxes.len() {
            if self.box_used[ib] || self.b.boxes[ib].sig != box_a.sig {
                continue;
            }
            let box_b = &self.b.boxes[ib];
            let mut trail = Vec::new();
            let ok = box_a
                .inputs
                .iter()
                .zip(&box_b.inputs)
                .chain(box_a.outputs.iter().zip(&box_b.outputs))
                .all(|(&wa, &wb)| self.bind(wa, wb, &mut trail));
            if ok {
                self.box_ab[ia] = Some(ib);
                self.box_used[ib] = true;
                if self.place(order, k + 1) {
                    return true;
                }
                self.box_ab[ia] = None;
                self.box_used[ib] = false;
            }
            self.unbind(&trail);
        }
        false
    }

    /// Wires touching no box and no boundary only need to agree by type.
    fn match_loose_wires(&mut self) -> bool {
        let mut free_b: HashMap<&crate::narrative::Actant, Vec<usize>> = HashMap::new();
        for wb in (0..self.b.wires.len()).rev() {
            if self.wire_ba[wb].is_none() {
                free_b.entry(&self.b.wires[wb]).or_default().push(wb);
            }
        }
        for wa in 0..self.a.wires.len() {
            if self.wire_ab[wa].is_some() {
                continue;
            }
            let Some(wb) = free_b.get_mut(&self.a.wires[wa]).and_then(Vec::pop) else {
                return false;
            };
            self.wire_ab[wa] = Some(wb);
            self.wire_ba[wb] = Some(wa);
        }
        true
    }
}
