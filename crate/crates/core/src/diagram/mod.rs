//! Wiring diagrams over role-indexed actants: the free symmetric monoidal
//! category on the actants, extended with copy/merge/discard/create, with
//! terms evaluated to open hypergraphs.

mod generator;
mod hypergraph;
mod iso;
mod term;
pub mod trajectory;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::narrative::Actant;

pub use generator::{factitive, np_generator, GenKind, GeneratorSig, Modality};
pub use hypergraph::{evaluate, HyperBox, HypergraphDoc, OpenHypergraph};
pub use iso::{iso_check, IsoWitness};
pub use term::{compose, par, seq, substitute, tensor, DefinitionTable, MorphismTerm, TermExpr};
pub use trajectory::{build_trajectory, Trajectory, TrajectoryPlan};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("type mismatch at factor {index}: codomain has {left}, domain has {right}")]
    TypeMismatch {
        index: usize,
        left: String,
        right: String,
    },
    #[error("interface mismatch substituting `{id}`: box is {expected}, definition is {found}")]
    InterfaceMismatch {
        id: String,
        expected: String,
        found: String,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown actant `{0}`")]
    UnknownActant(String),
    #[error("plan: {0}")]
    Plan(String),
    #[error("malformed hypergraph: {0}")]
    Malformed(String),
}

/// A tensor product of actants; the empty word is the monoidal unit `I`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TensorWord(pub Vec<Actant>);

impl TensorWord {
    pub fn unit() -> Self {
        TensorWord(Vec::new())
    }

    pub fn single(a: Actant) -> Self {
        TensorWord(vec![a])
    }

    /// Parse each `entity_Role` token; panics on malformed input.
    pub fn lit(tokens: &[&str]) -> Self {
        TensorWord(tokens.iter().map(|t| Actant::lit(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Actant] {
        &self.0
    }

    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TensorWord(v)
    }

    /// Index of the first factor where the two words differ, if any.
    pub fn first_difference(&self, other: &TensorWord) -> Option<usize> {
        let n = self.len().min(other.len());
        (0..n)
            .find(|&i| self.0[i] != other.0[i])
            .or(if self.len() == other.len() { None } else { Some(n) })
    }
}

impl From<Vec<Actant>> for TensorWord {
    fn from(v: Vec<Actant>) -> Self {
        TensorWord(v)
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
