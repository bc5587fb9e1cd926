//! Shared test helpers: a random generator of well-typed terms over a
//! two-type alphabet and an independent graph-splice oracle for substitution.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use nc_core::diagram::{
    compose, tensor, GeneratorSig, HyperBox, MorphismTerm, OpenHypergraph, TensorWord,
};
use nc_core::narrative::Actant;
use rand::Rng;

pub fn x() -> Actant {
    Actant::lit("x_Object")
}

pub fn y() -> Actant {
    Actant::lit("y_Helper")
}

pub fn word(ts: &[Actant]) -> TensorWord {
    TensorWord(ts.to_vec())
}

pub fn plain(id: &str, dom: &[Actant], cod: &[Actant]) -> MorphismTerm {
    MorphismTerm::gen(GeneratorSig::plain(id, word(dom), word(cod)))
}

/// The box that random hosts contain and random definitions replace.
pub const BOX: &str = "B";

pub fn box_term() -> MorphismTerm {
    plain(BOX, &[x()], &[y(), x()])
}

fn generators() -> Vec<MorphismTerm> {
    vec![
        plain("f", &[x()], &[y()]),
        plain("g", &[y(), y()], &[x()]),
        plain("k", &[], &[x()]),
        plain("h", &[y()], &[]),
    ]
}

fn id_or_none(w: &[Actant]) -> Option<MorphismTerm> {
    (!w.is_empty()).then(|| MorphismTerm::Id(word(w)))
}

/// `id ⊗ middle ⊗ id` applied at `at` over `width` factors of `cur`.
fn layer(cur: &[Actant], at: usize, width: usize, middle: MorphismTerm) -> MorphismTerm {
    let parts: Vec<MorphismTerm> = [
        id_or_none(&cur[..at]),
        Some(middle),
        id_or_none(&cur[at + width..]),
    ]
    .into_iter()
    .flatten()
    .collect();
    parts.into_iter().reduce(tensor).unwrap()
}

/// One random layer applicable to `cur`, with the resulting word.
fn random_layer<R: Rng>(rng: &mut R, cur: &[Actant], with_box: bool) -> (MorphismTerm, Vec<Actant>) {
    loop {
        let choice = rng.gen_range(0..9);
        let n = cur.len();
        let at = if n == 0 { 0 } else { rng.gen_range(0..n) };
        let mut next = cur.to_vec();
        match choice {
            0 | 1 if n > 0 => {
                let mut cands: Vec<MorphismTerm> = generators();
                if with_box {
                    cands.push(box_term());
                }
                cands.retain(|g| {
                    let d = g.dom();
                    !d.is_empty() && at + d.len() <= n && d.factors() == &cur[at..at + d.len()]
                });
                if cands.is_empty() {
                    continue;
                }
                let g = cands.swap_remove(rng.gen_range(0..cands.len()));
                let (dl, cod) = (g.dom().len(), g.cod());
                next.splice(at..at + dl, cod.factors().iter().cloned());
                return (layer(cur, at, dl, g), next);
            }
            2 if n > 0 => {
                next.insert(at, cur[at].clone());
                return (layer(cur, at, 1, MorphismTerm::Copy(cur[at].clone())), next);
            }
            3 if n > 1 && at + 1 < n && cur[at] == cur[at + 1] => {
                next.remove(at + 1);
                return (layer(cur, at, 2, MorphismTerm::Merge(cur[at].clone())), next);
            }
            4 if n > 1 && at + 1 < n => {
                next.swap(at, at + 1);
                let s = MorphismTerm::Sym(word(&cur[at..at + 1]), word(&cur[at + 1..at + 2]));
                return (layer(cur, at, 2, s), next);
            }
            5 if n > 2 => {
                next.remove(at);
                return (layer(cur, at, 1, MorphismTerm::Discard(cur[at].clone())), next);
            }
            6 if n < 4 => {
                let t = if rng.gen_bool(0.5) { x() } else { y() };
                next.push(t.clone());
                let m = MorphismTerm::Create(t);
                let full = match id_or_none(cur) {
                    Some(id) => tensor(id, m),
                    None => m,
                };
                return (full, next);
            }
            7 | 8 if with_box && n > 0 && cur[at] == x() => {
                let b = box_term();
                next.splice(at..at + 1, [y(), x()]);
                return (layer(cur, at, 1, b), next);
            }
            _ => continue,
        }
    }
}

/// Compose a list of terms with a random bracketing.
fn bracket<R: Rng>(rng: &mut R, mut ts: Vec<MorphismTerm>) -> MorphismTerm {
    while ts.len() > 1 {
        let i = rng.gen_range(0..ts.len() - 1);
        let b = ts.remove(i + 1);
        let a = ts.remove(i);
        ts.insert(i, compose(a, b).expect("layers chain"));
    }
    ts.pop().unwrap()
}

/// A random well-typed term with domain `dom` built from `layers` layers.
pub fn random_term<R: Rng>(rng: &mut R, dom: &[Actant], layers: usize, with_box: bool) -> MorphismTerm {
    let mut cur = dom.to_vec();
    let mut ts = vec![MorphismTerm::Id(word(dom))];
    for _ in 0..layers {
        let (l, next) = random_layer(rng, &cur, with_box);
        ts.push(l);
        cur = next;
    }
    bracket(rng, ts)
}

/// Random term with the interface of [`box_term`]: a random body whose
/// outputs are then merged (or created) down to `y ⊗ x`.
pub fn random_definition<R: Rng>(rng: &mut R) -> MorphismTerm {
    let layers = rng.gen_range(0..5);
    let mut t = random_term(rng, &[x()], layers, false);
    let mut cur: Vec<Actant> = t.cod().0;
    let push = |t: &mut MorphismTerm, l: MorphismTerm| {
        *t = compose(t.clone(), l).expect("fix-up layer");
    };
    // Bubble all `y` factors to the front, then fuse each run.
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| cur[i] == x() && cur[i + 1] == y()) else {
            break;
        };
        let s = MorphismTerm::Sym(word(&cur[i..i + 1]), word(&cur[i + 1..i + 2]));
        push(&mut t, layer(&cur, i, 2, s));
        cur.swap(i, i + 1);
    }
    for target in [y(), x()] {
        let first = cur.iter().position(|a| *a == target);
        match first {
            None => {
                let pos = if target == y() { 0 } else { cur.len() };
                let m = MorphismTerm::Create(target.clone());
                let l = match (id_or_none(&cur[..pos]), id_or_none(&cur[pos..])) {
                    (None, None) => m,
                    (Some(a), None) => tensor(a, m),
                    (None, Some(b)) => tensor(m, b),
                    (Some(a), Some(b)) => tensor(tensor(a, m), b),
                };
                push(&mut t, l);
                cur.insert(pos, target);
            }
            Some(i) => {
                while i + 1 < cur.len() && cur[i + 1] == target {
                    push(&mut t, layer(&cur, i, 2, MorphismTerm::Merge(target.clone())));
                    cur.remove(i + 1);
                }
            }
        }
    }
    assert_eq!(cur, [y(), x()]);
    t
}

/// Substitution done on graphs: cut every box labelled `id` out of `host`
/// and glue in a fresh copy of `def`, identifying boundaries with ports.
pub fn splice(host: &OpenHypergraph, id: &str, def: &OpenHypergraph) -> OpenHypergraph {
    let mut wires = host.wires.clone();
    let mut parent: Vec<usize> = (0..wires.len()).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            a = p[a];
        }
        a
    }
    let mut glue = Vec::new();
    let mut boxes = Vec::new();
    for b in &host.boxes {
        if b.sig.id != id {
            boxes.push(b.clone());
            continue;
        }
        let off = wires.len();
        wires.extend(def.wires.iter().cloned());
        parent.extend(off..off + def.wires.len());
        for db in &def.boxes {
            boxes.push(HyperBox {
                sig: Arc::clone(&db.sig),
                inputs: db.inputs.iter().map(|w| w + off).collect(),
                outputs: db.outputs.iter().map(|w| w + off).collect(),
            });
        }
        for (k, &w) in def.inputs.iter().enumerate() {
            glue.push((off + w, b.inputs[k]));
        }
        for (k, &w) in def.outputs.iter().enumerate() {
            glue.push((off + w, b.outputs[k]));
        }
    }
    for (a, b) in glue {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut renum: HashMap<usize, usize> = HashMap::new();
    let mut out_wires = Vec::new();
    let mut map = |w: usize, parent: &mut Vec<usize>| {
        let r = find(parent, w);
        *renum.entry(r).or_insert_with(|| {
            out_wires.push(wires[r].clone());
            out_wires.len() - 1
        })
    };
    let boxes: Vec<HyperBox> = boxes
        .into_iter()
        .map(|b| HyperBox {
            sig: b.sig,
            inputs: b.inputs.iter().map(|&w| map(w, &mut parent)).collect(),
            outputs: b.outputs.iter().map(|&w| map(w, &mut parent)).collect(),
        })
        .collect();
    let inputs = host.inputs.iter().map(|&w| map(w, &mut parent)).collect();
    let outputs = host.outputs.iter().map(|&w| map(w, &mut parent)).collect();
    for w in 0..wires.len() {
        map(w, &mut parent);
    }
    OpenHypergraph {
        wires: out_wires,
        boxes,
        inputs,
        outputs,
    }
}

fn c(a: MorphismTerm, b: MorphismTerm) -> MorphismTerm {
    compose(a, b).expect("law instance is well typed")
}

fn id(ts: &[Actant]) -> MorphismTerm {
    MorphismTerm::Id(word(ts))
}

/// The nine identities every hypergraph category satisfies, each
/// instantiated at both wire types (and with sample generators where the
/// law quantifies over morphisms). Each pair must evaluate to isomorphic
/// hypergraphs.
pub fn diagram_laws() -> Vec<(&'static str, Vec<(MorphismTerm, MorphismTerm)>)> {
    let f = plain("f", &[x()], &[y()]);
    let g = plain("g", &[y(), y()], &[x()]);
    let h = plain("h", &[y()], &[]);
    let k = plain("k", &[], &[x()]);
    let types = [x(), y()];
    let per_type = |law: &dyn Fn(&Actant) -> (MorphismTerm, MorphismTerm)| -> Vec<_> {
        types.iter().map(law).collect()
    };
    let copy = |t: &Actant| MorphismTerm::Copy(t.clone());
    let merge = |t: &Actant| MorphismTerm::Merge(t.clone());
    let sym = |a: &Actant, b: &Actant| MorphismTerm::Sym(word(&[a.clone()]), word(&[b.clone()]));

    vec![
        (
            "identity",
            vec![
                (c(id(&[x()]), f.clone()), f.clone()),
                (c(f.clone(), id(&[y()])), f.clone()),
                (c(id(&[y(), y()]), g.clone()), c(g.clone(), id(&[x()]))),
            ],
        ),
        (
            "composition associativity",
            vec![
                (
                    c(c(copy(&y()), g.clone()), f.clone()),
                    c(copy(&y()), c(g.clone(), f.clone())),
                ),
                (
                    c(c(f.clone(), copy(&y())), g.clone()),
                    c(f.clone(), c(copy(&y()), g.clone())),
                ),
            ],
        ),
        (
            "symmetry involution",
            vec![
                (c(sym(&x(), &y()), sym(&y(), &x())), id(&[x(), y()])),
                (c(sym(&x(), &x()), sym(&x(), &x())), id(&[x(), x()])),
                (
                    c(
                        MorphismTerm::Sym(word(&[x(), y()]), word(&[y()])),
                        MorphismTerm::Sym(word(&[y()]), word(&[x(), y()])),
                    ),
                    id(&[x(), y(), y()]),
                ),
            ],
        ),
        (
            "frobenius (merge left)",
            per_type(&|t| {
                (
                    c(tensor(id(&[t.clone()]), copy(t)), tensor(merge(t), id(&[t.clone()]))),
                    c(merge(t), copy(t)),
                )
            }),
        ),
        (
            "frobenius (merge right)",
            per_type(&|t| {
                (
                    c(tensor(copy(t), id(&[t.clone()])), tensor(id(&[t.clone()]), merge(t))),
                    c(merge(t), copy(t)),
                )
            }),
        ),
        (
            "commutativity",
            types
                .iter()
                .flat_map(|t| [(c(copy(t), sym(t, t)), copy(t)), (c(sym(t, t), merge(t)), merge(t))])
                .collect(),
        ),
        (
            "specialness",
            per_type(&|t| (c(copy(t), merge(t)), id(&[t.clone()]))),
        ),
        (
            "tensor unit",
            vec![
                (tensor(f.clone(), id(&[])), f.clone()),
                (tensor(id(&[]), g.clone()), g.clone()),
                (tensor(k.clone(), id(&[])), tensor(id(&[]), k.clone())),
            ],
        ),
        (
            "tensor associativity",
            vec![
                (
                    tensor(tensor(f.clone(), g.clone()), h.clone()),
                    tensor(f.clone(), tensor(g.clone(), h.clone())),
                ),
                (
                    tensor(tensor(k.clone(), copy(&x())), merge(&y())),
                    tensor(k.clone(), tensor(copy(&x()), merge(&y()))),
                ),
            ],
        ),
    ]
}

/// Kleisli arrows `{a, b} → T{a, b}` as plain index tables: lists of target
/// indices for List, optional indices for Maybe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawArrow {
    List(Vec<Vec<usize>>),
    Maybe(Vec<Option<usize>>),
}

const ATOMS: [&str; 2] = ["a", "b"];

/// Every arrow from a 2-element set to `T` of a 2-element set; lists have at
/// most `max_len` entries.
pub fn raw_arrows(kind: nc_core::kleisli::MonadKind, max_len: usize) -> Vec<RawArrow> {
    use nc_core::kleisli::MonadKind;
    match kind {
        MonadKind::Maybe => {
            let vals = [None, Some(0), Some(1)];
            let mut out = Vec::new();
            for &p in &vals {
                for &q in &vals {
                    out.push(RawArrow::Maybe(vec![p, q]));
                }
            }
            out
        }
        MonadKind::List => {
            let mut lists: Vec<Vec<usize>> = vec![vec![]];
            let mut frontier = lists.clone();
            for _ in 0..max_len {
                let next: Vec<Vec<usize>> = frontier
                    .iter()
                    .flat_map(|l| (0..2).map(move |i| [l.clone(), vec![i]].concat()))
                    .collect();
                lists.extend(next.iter().cloned());
                frontier = next;
            }
            let mut out = Vec::new();
            for p in &lists {
                for q in &lists {
                    out.push(RawArrow::List(vec![p.clone(), q.clone()]));
                }
            }
            out
        }
    }
}

/// Composite "f then g" computed directly on index tables.
pub fn raw_compose(f: &RawArrow, g: &RawArrow) -> RawArrow {
    match (f, g) {
        (RawArrow::List(f), RawArrow::List(g)) => RawArrow::List(
            f.iter()
                .map(|ys| ys.iter().flat_map(|&y| g[y].iter().copied()).collect())
                .collect(),
        ),
        (RawArrow::Maybe(f), RawArrow::Maybe(g)) => {
            RawArrow::Maybe(f.iter().map(|y| y.and_then(|y| g[y])).collect())
        }
        _ => panic!("mixed monads"),
    }
}

/// The same arrow as a library value.
pub fn to_finfun(r: &RawArrow) -> nc_core::kleisli::FinFun {
    use nc_core::kleisli::{FinFun, FinSet, MonadKind, Value};
    let set = FinSet::new(ATOMS).unwrap();
    let (kind, values): (MonadKind, Vec<Value>) = match r {
        RawArrow::List(rows) => (
            MonadKind::List,
            rows.iter()
                .map(|ys| Value::list(ys.iter().map(|&y| Value::atom(ATOMS[y]))))
                .collect(),
        ),
        RawArrow::Maybe(rows) => (
            MonadKind::Maybe,
            rows.iter()
                .map(|y| match y {
                    None => Value::Absent,
                    Some(y) => Value::present(Value::atom(ATOMS[*y])),
                })
                .collect(),
        ),
    };
    FinFun::kleisli(kind, set.clone(), set, ATOMS.iter().zip(values)).unwrap()
}

/// Counts for the exhaustive associativity check over 2-element carriers:
/// `(triples checked, library violations, disagreements with the direct
/// index-table composite)`.
pub fn kleisli_associativity_sweep(kind: nc_core::kleisli::MonadKind) -> (u64, u64, u64) {
    use nc_core::kleisli::{kleisli_compose, MonadSpec};
    let monad = MonadSpec::for_kind(kind);
    let raw = raw_arrows(kind, 2);
    let lib: Vec<_> = raw.iter().map(to_finfun).collect();
    let (mut checked, mut violations, mut disagreements) = (0, 0, 0);
    for (fi, f) in lib.iter().enumerate() {
        for (gi, g) in lib.iter().enumerate() {
            let fg = kleisli_compose(&monad, f, g).unwrap();
            let raw_fg = raw_compose(&raw[fi], &raw[gi]);
            for (hi, h) in lib.iter().enumerate() {
                let left = kleisli_compose(&monad, &fg, h).unwrap();
                let gh = kleisli_compose(&monad, g, h).unwrap();
                let right = kleisli_compose(&monad, f, &gh).unwrap();
                checked += 1;
                if left != right {
                    violations += 1;
                }
                if left != to_finfun(&raw_compose(&raw_fg, &raw[hi])) {
                    disagreements += 1;
                }
            }
        }
    }
    (checked, violations, disagreements)
}
