use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{DiagramError, GenKind, GeneratorSig, Modality, MorphismTerm, TensorWord};
use crate::narrative::{Actant, JunctionType};

/// A generator occurrence. Ports refer to wires by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperBox {
    pub sig: Arc<GeneratorSig>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

/// An evaluated diagram: boxes with ordered ports, typed wires of any degree,
/// and ordered boundaries. Copy, merge, create and discard never appear as
/// boxes; they only change how ports are grouped into wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenHypergraph {
    pub wires: Vec<Actant>,
    pub boxes: Vec<HyperBox>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl OpenHypergraph {
    pub fn dom(&self) -> TensorWord {
        TensorWord(self.inputs.iter().map(|&w| self.wires[w].clone()).collect())
    }

    pub fn cod(&self) -> TensorWord {
        TensorWord(self.outputs.iter().map(|&w| self.wires[w].clone()).collect())
    }

    /// Port and boundary attachments of every wire.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.wires.len()];
        for b in &self.boxes {
            for &w in b.inputs.iter().chain(&b.outputs) {
                d[w] += 1;
            }
        }
        for &w in self.inputs.iter().chain(&self.outputs) {
            d[w] += 1;
        }
        d
    }

    pub fn degree(&self, wire: usize) -> usize {
        self.degrees()[wire]
    }

    /// Check port types against box signatures and that indices are in range.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let n = self.wires.len();
        let bad = |what: String| Err(DiagramError::Malformed(what));
        for (i, b) in self.boxes.iter().enumerate() {
            if b.inputs.len() != b.sig.dom.len() || b.outputs.len() != b.sig.cod.len() {
                return bad(format!("box {i} ({}) has the wrong number of ports", b.sig.id));
            }
            let ports = b.inputs.iter().zip(&b.sig.dom.0).chain(b.outputs.iter().zip(&b.sig.cod.0));
            for (&w, ty) in ports {
                if w >= n {
                    return bad(format!("box {i} refers to missing wire {w}"));
                }
                if &self.wires[w] != ty {
                    return bad(format!(
                        "box {i} ({}) expects `{ty}` on a `{}` wire",
                        b.sig.id, self.wires[w]
                    ));
                }
            }
        }
        if let Some(&w) = self.inputs.iter().chain(&self.outputs).find(|&&w| w >= n) {
            return bad(format!("boundary refers to missing wire {w}"));
        }
        Ok(())
    }

    pub fn to_doc(&self) -> HypergraphDoc {
        let name = |w: usize| format!("w{w}");
        HypergraphDoc {
            wires: self
                .wires
                .iter()
                .enumerate()
                .map(|(i, a)| WireDoc {
                    id: name(i),
                    actant: a.clone(),
                })
                .collect(),
            boxes: self
                .boxes
                .iter()
                .map(|b| BoxDoc {
                    generator: b.sig.id.clone(),
                    junction: match b.sig.kind {
                        GenKind::NarrativeProgram { junction } => Some(junction),
                        _ => None,
                    },
                    modality: match b.sig.kind {
                        GenKind::Factitive { modality } => Some(modality),
                        _ => None,
                    },
                    inputs: b.inputs.iter().map(|&w| name(w)).collect(),
                    outputs: b.outputs.iter().map(|&w| name(w)).collect(),
                })
                .collect(),
            inputs: self.inputs.iter().map(|&w| name(w)).collect(),
            outputs: self.outputs.iter().map(|&w| name(w)).collect(),
        }
    }

    pub fn from_doc(doc: &HypergraphDoc) -> Result<Self, DiagramError> {
        let mut index = HashMap::new();
        for (i, w) in doc.wires.iter().enumerate() {
            if index.insert(w.id.as_str(), i).is_some() {
                return Err(DiagramError::Malformed(format!("duplicate wire id `{}`", w.id)));
            }
        }
        let lookup = |id: &String| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| DiagramError::Malformed(format!("unknown wire `{id}`")))
        };
        let lookup_all = |ids: &[String]| ids.iter().map(lookup).collect::<Result<Vec<_>, _>>();
        let wires: Vec<Actant> = doc.wires.iter().map(|w| w.actant.clone()).collect();
        let mut boxes = Vec::new();
        for b in &doc.boxes {
            let inputs = lookup_all(&b.inputs)?;
            let outputs = lookup_all(&b.outputs)?;
            let kind = match (b.junction, b.modality) {
                (Some(junction), None) => GenKind::NarrativeProgram { junction },
                (None, Some(modality)) => GenKind::Factitive { modality },
                (None, None) => GenKind::Plain,
                (Some(_), Some(_)) => {
                    return Err(DiagramError::Malformed(format!(
                        "box `{}` has both a junction and a modality",
                        b.generator
                    )))
                }
            };
            let sig = GeneratorSig {
                id: b.generator.clone(),
                kind,
                dom: TensorWord(inputs.iter().map(|&w| wires[w].clone()).collect()),
                cod: TensorWord(outputs.iter().map(|&w| wires[w].clone()).collect()),
            };
            boxes.push(HyperBox {
                sig: Arc::new(sig),
                inputs,
                outputs,
            });
        }
        Ok(OpenHypergraph {
            wires,
            boxes,
            inputs: lookup_all(&doc.inputs)?,
            outputs: lookup_all(&doc.outputs)?,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        let doc: HypergraphDoc =
            serde_json::from_str(text).map_err(|e| DiagramError::Malformed(e.to_string()))?;
        Self::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("hypergraph serializes");
        s.push('\n');
        s
    }
}

/// File form of a hypergraph; wires are referred to by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphDoc {
    pub wires: Vec<WireDoc>,
    pub boxes: Vec<BoxDoc>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireDoc {
    pub id: String,
    pub actant: Actant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub junction: Option<JunctionType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modality: Option<Modality>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

/// Port slots are nodes of a union-find; composition and the Frobenius
/// nodes only ever union them.
#[derive(Default)]
struct Builder {
    parent: Vec<usize>,
    types: Vec<Actant>,
    boxes: Vec<(Arc<GeneratorSig>, Vec<usize>, Vec<usize>)>,
}

impl Builder {
    fn node(&mut self, t: &Actant) -> usize {
        self.parent.push(self.parent.len());
        self.types.push(t.clone());
        self.parent.len() - 1
    }

    fn nodes(&mut self, w: &TensorWord) -> Vec<usize> {
        w.0.iter().map(|t| self.node(t)).collect()
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb.max(ra)] = rb.min(ra);
        }
    }

    fn eval(&mut self, t: &MorphismTerm) -> (Vec<usize>, Vec<usize>) {
        match t {
            MorphismTerm::Id(w) => {
                let n = self.nodes(w);
                (n.clone(), n)
            }
            MorphismTerm::Sym(a, b) => {
                let na = self.nodes(a);
                let nb = self.nodes(b);
                let ins = na.iter().chain(&nb).copied().collect();
                let outs = nb.iter().chain(&na).copied().collect();
                (ins, outs)
            }
            MorphismTerm::Gen(sig) => {
                let ins = self.nodes(&sig.dom);
                let outs = self.nodes(&sig.cod);
                self.boxes.push((sig.clone(), ins.clone(), outs.clone()));
                (ins, outs)
            }
            MorphismTerm::Copy(x) => {
                let n = self.node(x);
                (vec![n], vec![n, n])
            }
            MorphismTerm::Merge(x) => {
                let n = self.node(x);
                (vec![n, n], vec![n])
            }
            MorphismTerm::Discard(x) => {
                let n = self.node(x);
                (vec![n], vec![])
            }
            MorphismTerm::Create(x) => {
                let n = self.node(x);
                (vec![], vec![n])
            }
            MorphismTerm::Compose(f, g) => {
                let (fi, fo) = self.eval(f);
                let (gi, go) = self.eval(g);
                for (a, b) in fo.into_iter().zip(gi) {
                    self.union(a, b);
                }
                (fi, go)
            }
            MorphismTerm::Tensor(f, g) => {
                let (mut fi, mut fo) = self.eval(f);
                let (gi, go) = self.eval(g);
                fi.extend(gi);
                fo.extend(go);
                (fi, fo)
            }
        }
    }
}

/// Evaluate a term to its open hypergraph. Wires are numbered by first
/// appearance: inputs, then box ports in box order, then outputs, then wires
/// attached to nothing.
pub fn evaluate(t: &MorphismTerm) -> OpenHypergraph {
    let mut b = Builder::default();
    let (ins, outs) = b.eval(t);

    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut wires = Vec::new();
    let mut wire_of = |b: &mut Builder, node: usize| -> usize {
        let root = b.find(node);
        *number.entry(root).or_insert_with(|| {
            wires.push(b.types[root].clone());
            wires.len() - 1
        })
    };

    let inputs: Vec<usize> = ins.iter().map(|&n| wire_of(&mut b, n)).collect();
    let raw_boxes = std::mem::take(&mut b.boxes);
    let boxes: Vec<HyperBox> = raw_boxes
        .into_iter()
        .map(|(sig, i, o)| HyperBox {
            sig,
            inputs: i.iter().map(|&n| wire_of(&mut b, n)).collect(),
            outputs: o.iter().map(|&n| wire_of(&mut b, n)).collect(),
        })
        .collect();
    let outputs: Vec<usize> = outs.iter().map(|&n| wire_of(&mut b, n)).collect();
    for n in 0..b.parent.len() {
        wire_of(&mut b, n);
    }
    OpenHypergraph {
        wires,
        boxes,
        inputs,
        outputs,
    }
}
