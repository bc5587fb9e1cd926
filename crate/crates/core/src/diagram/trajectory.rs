//! Assemble a narrative trajectory from a plan: which boxes appear, how their
//! ports are wired (copies, merges, explicit links), and the boundary order.
//!
//! Wiring is resolved per actant type. Every input-boundary position and box
//! output is a producer, every box input and output-boundary position is a
//! consumer. `merges` joins producers, `copies` joins consumers, `links` join
//! one producer to one consumer. If afterwards a type has exactly one group
//! lacking consumers and one lacking producers, the two are joined; any other
//! leftover is an error unless covered by `discards` or `creates`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    compose, factitive, np_generator, par, DefinitionTable, DiagramError, GenKind, GeneratorSig,
    Modality, MorphismTerm, TensorWord, TermExpr,
};
use crate::narrative::{Actant, NpCorpus};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPlan {
    pub name: String,
    /// Top-level boxes, in preferred composition order.
    pub generators: Vec<String>,
    #[serde(default)]
    pub factitives: Vec<FactitiveDecl>,
    /// Composite boxes, expanded by substitution.
    #[serde(default)]
    pub definitions: BTreeMap<String, TermExpr>,
    /// Interfaces that differ from the program's own `S1 → S2 ⊗ X…`.
    #[serde(default)]
    pub interfaces: BTreeMap<String, InterfaceOverride>,
    pub inputs: Vec<Actant>,
    pub outputs: Vec<Actant>,
    /// Actant → consumers fed from one wire.
    #[serde(default)]
    pub copies: BTreeMap<Actant, Vec<String>>,
    /// Actant → producers joined into one wire.
    #[serde(default)]
    pub merges: BTreeMap<Actant, Vec<String>>,
    #[serde(default)]
    pub links: Vec<Link>,
    /// Actant → producers whose wire is deliberately left unconsumed.
    #[serde(default)]
    pub discards: BTreeMap<Actant, Vec<String>>,
    /// Actant → consumers fed by a freshly created wire.
    #[serde(default)]
    pub creates: BTreeMap<Actant, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactitiveDecl {
    pub id: String,
    pub modality: Modality,
    pub dom: Vec<Actant>,
    pub cod: Vec<Actant>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dom: Option<Vec<Actant>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cod: Option<Vec<Actant>>,
}

/// One producer wired straight to one consumer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub actant: Actant,
    pub from: String,
    pub to: String,
}

impl TrajectoryPlan {
    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(text).map_err(|e| DiagramError::Plan(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plan serializes");
        s.push('\n');
        s
    }
}

/// The factorized trajectory and what is needed to expand it.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub term: MorphismTerm,
    pub definitions: DefinitionTable,
    /// Every generator the plan can refer to, by id.
    pub signatures: BTreeMap<String, Arc<GeneratorSig>>,
}

impl Trajectory {
    /// The trajectory with every registered definition substituted.
    pub fn expanded(&self) -> Result<MorphismTerm, DiagramError> {
        self.definitions.expand(&self.term)
    }
}

fn plan_err(msg: impl Into<String>) -> DiagramError {
    DiagramError::Plan(msg.into())
}

/// Resolve the plan's generators and compile its wiring into a term.
pub fn build_trajectory(corpus: &NpCorpus, plan: &TrajectoryPlan) -> Result<Trajectory, DiagramError> {
    let known = |a: &Actant| corpus.actants().contains(a);
    for a in plan.inputs.iter().chain(&plan.outputs) {
        if !known(a) {
            return Err(DiagramError::UnknownActant(a.to_string()));
        }
    }

    // Base signatures: programs from the corpus and declared factitives.
    let mut base: BTreeMap<String, Arc<GeneratorSig>> = BTreeMap::new();
    for p in corpus.programs() {
        let mut sig = np_generator(p);
        if let Some(o) = plan.interfaces.get(&p.id) {
            if let Some(dom) = &o.dom {
                sig.dom = TensorWord(dom.clone());
            }
            if let Some(cod) = &o.cod {
                sig.cod = TensorWord(cod.clone());
            }
        }
        base.insert(p.id.clone(), Arc::new(sig));
    }
    for f in &plan.factitives {
        if base.contains_key(&f.id) {
            return Err(plan_err(format!("factitive id `{}` is already taken", f.id)));
        }
        if let Some(a) = f.dom.iter().chain(&f.cod).find(|a| !known(a)) {
            return Err(DiagramError::UnknownActant(a.to_string()));
        }
        let sig = factitive(&f.id, f.modality, TensorWord(f.dom.clone()), TensorWord(f.cod.clone()));
        base.insert(f.id.clone(), Arc::new(sig));
    }
    for id in plan.interfaces.keys() {
        if corpus.get(id).is_none() {
            return Err(DiagramError::UnknownGenerator(id.clone()));
        }
    }

    // Composite boxes take their interface from their definition.
    let lookup = |id: &str| base.get(id).cloned();
    let mut definitions = DefinitionTable::new();
    let mut signatures = base.clone();
    for (id, expr) in &plan.definitions {
        let def = expr.resolve(&lookup)?;
        let kind = base
            .get(id)
            .map(|s| s.kind.clone())
            .unwrap_or(GenKind::Plain);
        if plan.interfaces.contains_key(id) {
            return Err(plan_err(format!(
                "`{id}` has both a definition and an interface override"
            )));
        }
        let sig = GeneratorSig {
            id: id.clone(),
            kind,
            dom: def.dom(),
            cod: def.cod(),
        };
        signatures.insert(id.clone(), Arc::new(sig));
        definitions.insert(id.clone(), def);
    }

    let mut boxes = Vec::new();
    for id in &plan.generators {
        let sig = signatures
            .get(id)
            .ok_or_else(|| DiagramError::UnknownGenerator(id.clone()))?;
        if boxes.iter().any(|b: &Arc<GeneratorSig>| &b.id == id) {
            return Err(plan_err(format!("generator `{id}` is listed twice")));
        }
        boxes.push(sig.clone());
    }

    let net = Netlist::resolve(plan, &boxes)?;
    let term = net.compile(plan, &boxes)?;
    Ok(Trajectory {
        term,
        definitions,
        signatures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Port {
    In(usize),
    Out(usize),
    BoxIn(usize, usize),
    BoxOut(usize, usize),
}

impl Port {
    fn is_producer(self) -> bool {
        matches!(self, Port::In(_) | Port::BoxOut(..))
    }
}

struct Netlist {
    ports: Vec<Port>,
    types: Vec<Actant>,
    /// Net of each port.
    net_of: HashMap<Port, usize>,
    nets: Vec<Net>,
}

#[derive(Debug, Default)]
struct Net {
    ty: Option<Actant>,
    producers: Vec<Port>,
    consumers: Vec<Port>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Netlist {
    fn resolve(plan: &TrajectoryPlan, boxes: &[Arc<GeneratorSig>]) -> Result<Self, DiagramError> {
        let mut ports = Vec::new();
        let mut types = Vec::new();
        for (i, a) in plan.inputs.iter().enumerate() {
            ports.push(Port::In(i));
            types.push(a.clone());
        }
        for (b, sig) in boxes.iter().enumerate() {
            for (k, a) in sig.dom.0.iter().enumerate() {
                ports.push(Port::BoxIn(b, k));
                types.push(a.clone());
            }
            for (k, a) in sig.cod.0.iter().enumerate() {
                ports.push(Port::BoxOut(b, k));
                types.push(a.clone());
            }
        }
        for (i, a) in plan.outputs.iter().enumerate() {
            ports.push(Port::Out(i));
            types.push(a.clone());
        }
        let index: HashMap<Port, usize> = ports.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut uf = UnionFind((0..ports.len()).collect());

        let find_endpoint = |spec: &str, ty: &Actant, producer: bool| -> Result<usize, DiagramError> {
            let (name, nth) = match spec.rsplit_once('.') {
                Some((n, k)) if k.parse::<usize>().is_ok() => (n, Some(k.parse::<usize>().unwrap())),
                _ => (spec, None),
            };
            let candidates: Vec<usize> = match name {
                "in" if producer => (0..plan.inputs.len())
                    .filter(|&i| &plan.inputs[i] == ty)
                    .map(|i| index[&Port::In(i)])
                    .collect(),
                "out" if !producer => (0..plan.outputs.len())
                    .filter(|&i| &plan.outputs[i] == ty)
                    .map(|i| index[&Port::Out(i)])
                    .collect(),
                "in" | "out" => {
                    return Err(plan_err(format!(
                        "`{name}` cannot be a {} of `{ty}`",
                        if producer { "producer" } else { "consumer" }
                    )))
                }
                _ => {
                    let b = boxes
                        .iter()
                        .position(|s| s.id == name)
                        .ok_or_else(|| plan_err(format!("`{name}` is not a box of this plan")))?;
                    let word = if producer { &boxes[b].cod } else { &boxes[b].dom };
                    (0..word.len())
                        .filter(|&k| &word.0[k] == ty)
                        .map(|k| {
                            index[&if producer {
                                Port::BoxOut(b, k)
                            } else {
                                Port::BoxIn(b, k)
                            }]
                        })
                        .collect()
                }
            };
            let side = if producer { "output" } else { "input" };
            match (nth, candidates.len()) {
                (_, 0) => Err(plan_err(format!("`{name}` has no {side} of type `{ty}`"))),
                (None, 1) => Ok(candidates[0]),
                (None, _) => Err(plan_err(format!(
                    "`{name}` has several {side}s of type `{ty}`; write `{name}.k`"
                ))),
                (Some(k), n) if k < n => Ok(candidates[k]),
                (Some(k), _) => Err(plan_err(format!(
                    "`{name}.{k}`: no {side} {k} of type `{ty}`"
                ))),
            }
        };

        for (ty, producers) in &plan.merges {
            let ends = producers
                .iter()
                .map(|p| find_endpoint(p, ty, true))
                .collect::<Result<Vec<_>, _>>()?;
            for w in ends.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for (ty, consumers) in &plan.copies {
            let ends = consumers
                .iter()
                .map(|c| find_endpoint(c, ty, false))
                .collect::<Result<Vec<_>, _>>()?;
            for w in ends.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        for link in &plan.links {
            let p = find_endpoint(&link.from, &link.actant, true)?;
            let c = find_endpoint(&link.to, &link.actant, false)?;
            uf.union(p, c);
        }
        let mut discardable = Vec::new();
        for (ty, producers) in &plan.discards {
            for p in producers {
                discardable.push(find_endpoint(p, ty, true)?);
            }
        }
        let mut creatable = Vec::new();
        for (ty, consumers) in &plan.creates {
            for c in consumers {
                creatable.push(find_endpoint(c, ty, false)?);
            }
        }

        // Pair up what is left, one type at a time.
        let mut by_type: BTreeMap<&Actant, Vec<usize>> = BTreeMap::new();
        for (i, t) in types.iter().enumerate() {
            by_type.entry(t).or_default().push(i);
        }
        for (ty, members) in &by_type {
            let mut groups: BTreeMap<usize, (bool, bool)> = BTreeMap::new();
            for &m in members {
                let root = uf.find(m);
                let e = groups.entry(root).or_default();
                if ports[m].is_producer() {
                    e.0 = true;
                } else {
                    e.1 = true;
                }
            }
            let marked = |uf: &mut UnionFind, root: usize, list: &[usize]| {
                list.iter().any(|&x| uf.find(x) == root)
            };
            let mut dangling = Vec::new();
            let mut hungry = Vec::new();
            for (&root, &(has_p, has_c)) in &groups {
                if has_p && !has_c && !marked(&mut uf, root, &discardable) {
                    dangling.push(root);
                }
                if has_c && !has_p && !marked(&mut uf, root, &creatable) {
                    hungry.push(root);
                }
            }
            match (dangling.len(), hungry.len()) {
                (0, 0) => {}
                (1, 1) => uf.union(dangling[0], hungry[0]),
                (d, 0) => {
                    return Err(plan_err(format!(
                        "{d} `{ty}` wire(s) are produced but never consumed (add an output, a link, or a discard)"
                    )))
                }
                (0, h) => {
                    return Err(plan_err(format!(
                        "{h} `{ty}` consumer(s) have no producer (add an input, a link, or a create)"
                    )))
                }
                (d, h) => {
                    return Err(plan_err(format!(
                        "ambiguous `{ty}` wiring: {d} unconsumed producer group(s) and {h} unfed consumer group(s); use merges, copies or links"
                    )))
                }
            }
        }

        let mut net_ids: HashMap<usize, usize> = HashMap::new();
        let mut nets: Vec<Net> = Vec::new();
        let mut net_of = HashMap::new();
        for (i, p) in ports.iter().enumerate() {
            let root = uf.find(i);
            let n = *net_ids.entry(root).or_insert_with(|| {
                nets.push(Net::default());
                nets.len() - 1
            });
            let net = &mut nets[n];
            net.ty = Some(types[i].clone());
            if p.is_producer() {
                net.producers.push(*p);
            } else {
                net.consumers.push(*p);
            }
            net_of.insert(*p, n);
        }
        Ok(Netlist {
            ports,
            types,
            net_of,
            nets,
        })
    }

    /// Boxes in an order where every producer of a net runs before any of
    /// its consumers; plan order breaks ties.
    fn box_order(&self, boxes: &[Arc<GeneratorSig>]) -> Result<Vec<usize>, DiagramError> {
        let n = boxes.len();
        let mut after: Vec<Vec<bool>> = vec![vec![false; n]; n];
        for net in &self.nets {
            for p in &net.producers {
                let Port::BoxOut(pb, _) = p else { continue };
                for c in &net.consumers {
                    if let Port::BoxIn(cb, _) = c {
                        after[*cb][*pb] = true;
                    }
                }
            }
        }
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n).find(|&b| !done[b] && (0..n).all(|d| !after[b][d] || done[d]));
            match next {
                Some(b) => {
                    done[b] = true;
                    order.push(b);
                }
                None => {
                    let stuck: Vec<&str> = (0..n)
                        .filter(|&b| !done[b])
                        .map(|b| boxes[b].id.as_str())
                        .collect();
                    return Err(plan_err(format!(
                        "wiring is cyclic among {}",
                        stuck.join(", ")
                    )));
                }
            }
        }
        Ok(order)
    }

    fn compile(&self, plan: &TrajectoryPlan, boxes: &[Arc<GeneratorSig>]) -> Result<MorphismTerm, DiagramError> {
        debug_assert_eq!(self.ports.len(), self.types.len());
        let order = self.box_order(boxes)?;
        let mut e = Emitter {
            term: MorphismTerm::Id(TensorWord(plan.inputs.clone())),
            slots: (0..plan.inputs.len()).map(|i| self.net_of[&Port::In(i)]).collect(),
            uses: self.nets.iter().map(|n| n.consumers.len()).collect(),
            pending: self
                .nets
                .iter()
                .map(|n| n.producers.iter().filter(|p| matches!(p, Port::BoxOut(..))).count())
                .collect(),
            types: self
                .nets
                .iter()
                .map(|n| n.ty.clone().expect("every net has a port"))
                .collect(),
            creatable: self.nets.iter().map(|n| n.producers.is_empty()).collect(),
        };
        e.tidy()?;
        for b in order {
            let sig = &boxes[b];
            let wanted: Vec<usize> = (0..sig.dom.len())
                .map(|k| self.net_of[&Port::BoxIn(b, k)])
                .collect();
            e.gather(&wanted)?;
            let rest = e.slots.len() - wanted.len();
            let rest_word = e.word(wanted.len()..e.slots.len());
            e.apply(par([Some(MorphismTerm::Gen(sig.clone())), id_or_skip(rest_word)].into_iter().flatten().collect()))?;
            let outs: Vec<usize> = (0..sig.cod.len())
                .map(|k| self.net_of[&Port::BoxOut(b, k)])
                .collect();
            for &n in &outs {
                e.pending[n] -= 1;
            }
            let tail = e.slots.split_off(e.slots.len() - rest);
            e.slots = outs;
            e.slots.extend(tail);
            e.tidy()?;
        }
        let wanted: Vec<usize> = (0..plan.outputs.len())
            .map(|i| self.net_of[&Port::Out(i)])
            .collect();
        e.gather(&wanted)?;
        if e.slots.len() != wanted.len() {
            return Err(plan_err("internal: wires left over after the outputs"));
        }
        Ok(e.term)
    }
}

fn id_or_skip(w: TensorWord) -> Option<MorphismTerm> {
    (!w.is_empty()).then_some(MorphismTerm::Id(w))
}

/// Builds the term layer by layer while tracking which net each wire of the
/// current codomain carries.
struct Emitter {
    term: MorphismTerm,
    slots: Vec<usize>,
    /// Consumers of each net not yet served.
    uses: Vec<usize>,
    /// Box producers of each net that have not run yet.
    pending: Vec<usize>,
    types: Vec<Actant>,
    creatable: Vec<bool>,
}

impl Emitter {
    fn word(&self, range: std::ops::Range<usize>) -> TensorWord {
        TensorWord(self.slots[range].iter().map(|&n| self.types[n].clone()).collect())
    }

    fn apply(&mut self, layer: MorphismTerm) -> Result<(), DiagramError> {
        let current = std::mem::replace(&mut self.term, MorphismTerm::Id(TensorWord::unit()));
        self.term = compose(current, layer)?;
        Ok(())
    }

    /// `id ⊗ middle ⊗ id` around slots `[at, at + width)`.
    fn local(&mut self, at: usize, width: usize, middle: MorphismTerm) -> Result<(), DiagramError> {
        let pre = self.word(0..at);
        let post = self.word(at + width..self.slots.len());
        let layer = par([id_or_skip(pre), Some(middle), id_or_skip(post)].into_iter().flatten().collect());
        self.apply(layer)
    }

    fn swap(&mut self, i: usize) -> Result<(), DiagramError> {
        let a = TensorWord::single(self.types[self.slots[i]].clone());
        let b = TensorWord::single(self.types[self.slots[i + 1]].clone());
        self.local(i, 2, MorphismTerm::Sym(a, b))?;
        self.slots.swap(i, i + 1);
        Ok(())
    }

    fn move_to(&mut self, mut from: usize, to: usize) -> Result<(), DiagramError> {
        while from > to {
            self.swap(from - 1)?;
            from -= 1;
        }
        while from < to {
            self.swap(from)?;
            from += 1;
        }
        Ok(())
    }

    fn copy(&mut self, i: usize) -> Result<(), DiagramError> {
        let t = self.types[self.slots[i]].clone();
        self.local(i, 1, MorphismTerm::Copy(t))?;
        self.slots.insert(i + 1, self.slots[i]);
        Ok(())
    }

    fn create(&mut self, net: usize) -> Result<(), DiagramError> {
        let all = self.word(0..self.slots.len());
        let layer = par([id_or_skip(all), Some(MorphismTerm::Create(self.types[net].clone()))]
            .into_iter()
            .flatten()
            .collect());
        self.apply(layer)?;
        self.slots.push(net);
        Ok(())
    }

    /// Bring one slot per wanted net to the front, in order, copying nets
    /// that still have other consumers.
    fn gather(&mut self, wanted: &[usize]) -> Result<(), DiagramError> {
        for (j, &net) in wanted.iter().enumerate() {
            let pos = match (j..self.slots.len()).find(|&p| self.slots[p] == net) {
                Some(p) => p,
                None if self.creatable[net] => {
                    self.create(net)?;
                    self.slots.len() - 1
                }
                None => {
                    return Err(plan_err(format!(
                        "internal: `{}` is not available when needed",
                        self.types[net]
                    )))
                }
            };
            if self.uses[net] > 1 {
                self.copy(pos)?;
            }
            self.uses[net] -= 1;
            self.move_to(pos, j)?;
        }
        Ok(())
    }

    /// Merge slots carrying the same net and discard nets nobody needs.
    fn tidy(&mut self) -> Result<(), DiagramError> {
        loop {
            let dup = (0..self.slots.len()).find_map(|i| {
                (i + 1..self.slots.len())
                    .find(|&j| self.slots[j] == self.slots[i])
                    .map(|j| (i, j))
            });
            let Some((i, j)) = dup else { break };
            self.move_to(j, i + 1)?;
            let t = self.types[self.slots[i]].clone();
            self.local(i, 2, MorphismTerm::Merge(t))?;
            self.slots.remove(i + 1);
        }
        while let Some(i) = (0..self.slots.len())
            .find(|&i| self.uses[self.slots[i]] == 0 && self.pending[self.slots[i]] == 0)
        {
            let t = self.types[self.slots[i]].clone();
            self.local(i, 1, MorphismTerm::Discard(t))?;
            self.slots.remove(i);
        }
        Ok(())
    }
}
