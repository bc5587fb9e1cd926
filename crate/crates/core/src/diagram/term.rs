use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{DiagramError, GeneratorSig, TensorWord};
use crate::narrative::Actant;

/// A morphism term. `Compose(f, g)` means "f, then g".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismTerm {
    Id(TensorWord),
    Sym(TensorWord, TensorWord),
    Gen(Arc<GeneratorSig>),
    /// `t → t ⊗ t`
    Copy(Actant),
    /// `t → I`
    Discard(Actant),
    /// `t ⊗ t → t`
    Merge(Actant),
    /// `I → t`
    Create(Actant),
    Compose(Box<MorphismTerm>, Box<MorphismTerm>),
    Tensor(Box<MorphismTerm>, Box<MorphismTerm>),
}

impl MorphismTerm {
    pub fn gen(sig: GeneratorSig) -> Self {
        MorphismTerm::Gen(Arc::new(sig))
    }

    pub fn id(word: TensorWord) -> Self {
        MorphismTerm::Id(word)
    }

    pub fn dom(&self) -> TensorWord {
        match self {
            MorphismTerm::Id(w) => w.clone(),
            MorphismTerm::Sym(a, b) => a.concat(b),
            MorphismTerm::Gen(s) => s.dom.clone(),
            MorphismTerm::Copy(t) | MorphismTerm::Discard(t) => TensorWord::single(t.clone()),
            MorphismTerm::Merge(t) => TensorWord(vec![t.clone(), t.clone()]),
            MorphismTerm::Create(_) => TensorWord::unit(),
            MorphismTerm::Compose(f, _) => f.dom(),
            MorphismTerm::Tensor(f, g) => f.dom().concat(&g.dom()),
        }
    }

    pub fn cod(&self) -> TensorWord {
        match self {
            MorphismTerm::Id(w) => w.clone(),
            MorphismTerm::Sym(a, b) => b.concat(a),
            MorphismTerm::Gen(s) => s.cod.clone(),
            MorphismTerm::Copy(t) => TensorWord(vec![t.clone(), t.clone()]),
            MorphismTerm::Discard(_) => TensorWord::unit(),
            MorphismTerm::Merge(t) | MorphismTerm::Create(t) => TensorWord::single(t.clone()),
            MorphismTerm::Compose(_, g) => g.cod(),
            MorphismTerm::Tensor(f, g) => f.cod().concat(&g.cod()),
        }
    }

    /// Ids of every generator occurring in the term, in left-to-right order.
    pub fn generator_ids(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_gens(&mut |s| out.push(s.id.clone()));
        out
    }

    fn visit_gens(&self, f: &mut dyn FnMut(&GeneratorSig)) {
        match self {
            MorphismTerm::Gen(s) => f(s),
            MorphismTerm::Compose(a, b) | MorphismTerm::Tensor(a, b) => {
                a.visit_gens(f);
                b.visit_gens(f);
            }
            _ => {}
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            MorphismTerm::Compose(a, b) | MorphismTerm::Tensor(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for MorphismTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismTerm::Id(w) => write!(f, "id[{w}]"),
            MorphismTerm::Sym(a, b) => write!(f, "σ[{a} | {b}]"),
            MorphismTerm::Gen(s) => f.write_str(&s.id),
            MorphismTerm::Copy(t) => write!(f, "δ[{t}]"),
            MorphismTerm::Discard(t) => write!(f, "ε[{t}]"),
            MorphismTerm::Merge(t) => write!(f, "μ[{t}]"),
            MorphismTerm::Create(t) => write!(f, "η[{t}]"),
            MorphismTerm::Compose(a, b) => write!(f, "({a} ; {b})"),
            MorphismTerm::Tensor(a, b) => write!(f, "({a} ⊗ {b})"),
        }
    }
}

/// `f ; g`, checking that `cod(f) = dom(g)`.
pub fn compose(f: MorphismTerm, g: MorphismTerm) -> Result<MorphismTerm, DiagramError> {
    let cod = f.cod();
    let dom = g.dom();
    if let Some(index) = cod.first_difference(&dom) {
        let show = |w: &TensorWord| {
            w.0.get(index)
                .map_or_else(|| "nothing".to_string(), |a| format!("`{a}`"))
        };
        return Err(DiagramError::TypeMismatch {
            index,
            left: show(&cod),
            right: show(&dom),
        });
    }
    Ok(MorphismTerm::Compose(Box::new(f), Box::new(g)))
}

pub fn tensor(f: MorphismTerm, g: MorphismTerm) -> MorphismTerm {
    MorphismTerm::Tensor(Box::new(f), Box::new(g))
}

/// Left-to-right sequential composite of a non-empty list.
pub fn seq(terms: Vec<MorphismTerm>) -> Result<MorphismTerm, DiagramError> {
    let mut it = terms.into_iter();
    let first = it
        .next()
        .ok_or_else(|| DiagramError::Plan("empty sequential composite".into()))?;
    it.try_fold(first, compose)
}

/// Tensor of a list; the empty list is `id[I]`.
pub fn par(terms: Vec<MorphismTerm>) -> MorphismTerm {
    let mut it = terms.into_iter();
    match it.next() {
        None => MorphismTerm::Id(TensorWord::unit()),
        Some(first) => it.fold(first, tensor),
    }
}

/// Replace every `Gen` whose id is `box_id` by `definition`. The definition
/// must have exactly the box's interface, so the host's interface is kept.
pub fn substitute(
    host: &MorphismTerm,
    box_id: &str,
    definition: &MorphismTerm,
) -> Result<MorphismTerm, DiagramError> {
    let (dom, cod) = (definition.dom(), definition.cod());
    let go = |t: &MorphismTerm| substitute(t, box_id, definition);
    Ok(match host {
        MorphismTerm::Gen(s) if s.id == box_id => {
            if s.dom != dom || s.cod != cod {
                return Err(DiagramError::InterfaceMismatch {
                    id: box_id.to_string(),
                    expected: format!("{} → {}", s.dom, s.cod),
                    found: format!("{dom} → {cod}"),
                });
            }
            definition.clone()
        }
        MorphismTerm::Compose(a, b) => MorphismTerm::Compose(Box::new(go(a)?), Box::new(go(b)?)),
        MorphismTerm::Tensor(a, b) => MorphismTerm::Tensor(Box::new(go(a)?), Box::new(go(b)?)),
        other => other.clone(),
    })
}

/// Definitions of composite boxes in terms of smaller ones.
#[derive(Debug, Clone, Default)]
pub struct DefinitionTable {
    defs: BTreeMap<String, MorphismTerm>,
}

impl DefinitionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, def: MorphismTerm) {
        self.defs.insert(id.into(), def);
    }

    pub fn get(&self, id: &str) -> Option<&MorphismTerm> {
        self.defs.get(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Substitute one registered definition.
    pub fn expand_one(&self, term: &MorphismTerm, id: &str) -> Result<MorphismTerm, DiagramError> {
        let def = self
            .get(id)
            .ok_or_else(|| DiagramError::UnknownGenerator(id.to_string()))?;
        substitute(term, id, def)
    }

    /// Substitute registered definitions until none applies. Definitions that
    /// refer to themselves, directly or not, are rejected.
    pub fn expand(&self, term: &MorphismTerm) -> Result<MorphismTerm, DiagramError> {
        let mut current = term.clone();
        for _ in 0..=self.defs.len() {
            let pending: Vec<String> = current
                .generator_ids()
                .into_iter()
                .filter(|id| self.defs.contains_key(id))
                .collect();
            if pending.is_empty() {
                return Ok(current);
            }
            for id in dedup(pending) {
                current = substitute(&current, &id, &self.defs[&id])?;
            }
        }
        Err(DiagramError::Plan("definitions are cyclic".into()))
    }
}

fn dedup(mut ids: Vec<String>) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    ids.retain(|id| seen.insert(id.clone()));
    ids
}

/// Serialized form of a term, as used in plan files.
///
/// ```json
/// {"seq": [{"gen": "NP2"}, {"par": [{"id": ["Hare_SubjectState"]}, {"gen": "ctb"}]}]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermExpr {
    Gen(String),
    Seq(Vec<TermExpr>),
    Par(Vec<TermExpr>),
    Id(Vec<Actant>),
    Sym(Vec<Actant>, Vec<Actant>),
    Copy(Actant),
    Merge(Actant),
    Discard(Actant),
    Create(Actant),
}

impl TermExpr {
    /// Build the term, looking generators up by id.
    pub fn resolve<F>(&self, lookup: &F) -> Result<MorphismTerm, DiagramError>
    where
        F: Fn(&str) -> Option<Arc<GeneratorSig>>,
    {
        Ok(match self {
            TermExpr::Gen(id) => MorphismTerm::Gen(
                lookup(id).ok_or_else(|| DiagramError::UnknownGenerator(id.clone()))?,
            ),
            TermExpr::Seq(ts) => seq(ts.iter().map(|t| t.resolve(lookup)).collect::<Result<_, _>>()?)?,
            TermExpr::Par(ts) => par(ts.iter().map(|t| t.resolve(lookup)).collect::<Result<_, _>>()?),
            TermExpr::Id(w) => MorphismTerm::Id(TensorWord(w.clone())),
            TermExpr::Sym(a, b) => MorphismTerm::Sym(TensorWord(a.clone()), TensorWord(b.clone())),
            TermExpr::Copy(t) => MorphismTerm::Copy(t.clone()),
            TermExpr::Merge(t) => MorphismTerm::Merge(t.clone()),
            TermExpr::Discard(t) => MorphismTerm::Discard(t.clone()),
            TermExpr::Create(t) => MorphismTerm::Create(t.clone()),
        })
    }
}
