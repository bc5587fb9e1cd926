use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{DiagramError, TensorWord};
use crate::narrative::{JunctionType, NarrativeProgram};

/// The two factitive modalities that mediate between programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Modality {
    #[serde(rename = "causing-to-be")]
    CausingToBe,
    #[serde(rename = "causing-to-do")]
    CausingToDo,
}

impl Modality {
    pub fn name(self) -> &'static str {
        match self {
            Modality::CausingToBe => "causing-to-be",
            Modality::CausingToDo => "causing-to-do",
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modality {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "causing-to-be" => Ok(Modality::CausingToBe),
            "causing-to-do" => Ok(Modality::CausingToDo),
            other => Err(DiagramError::Plan(format!("unknown modality `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    NarrativeProgram { junction: JunctionType },
    Factitive { modality: Modality },
    /// A box with no narrative reading, used by tests and hand-built diagrams.
    Plain,
}

/// A generating box: an id, what it stands for, and its typed interface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSig {
    pub id: String,
    pub kind: GenKind,
    pub dom: TensorWord,
    pub cod: TensorWord,
}

impl GeneratorSig {
    pub fn plain(id: &str, dom: TensorWord, cod: TensorWord) -> Self {
        GeneratorSig {
            id: id.to_string(),
            kind: GenKind::Plain,
            dom,
            cod,
        }
    }

    /// Display label: `∩NP2`, `∪NP6`, or the modality name.
    pub fn label(&self, ascii: bool) -> String {
        match &self.kind {
            GenKind::NarrativeProgram { junction } => format!("{}{}", junction.render(ascii), self.id),
            GenKind::Factitive { modality } => modality.name().to_string(),
            GenKind::Plain => self.id.clone(),
        }
    }
}

impl fmt::Display for GeneratorSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} → {}", self.label(false), self.dom, self.cod)
    }
}

/// `[S1, S2, X1, ..., Xk] : S1 → S2 ⊗ X1 ⊗ ... ⊗ Xk`.
pub fn np_generator(p: &NarrativeProgram) -> GeneratorSig {
    GeneratorSig {
        id: p.id.clone(),
        kind: GenKind::NarrativeProgram {
            junction: p.junction,
        },
        dom: TensorWord::single(p.subject_doing().clone()),
        cod: TensorWord(p.actorializes[1..].to_vec()),
    }
}

/// A factitive box instantiated with the interface it has at one use site.
pub fn factitive(id: &str, modality: Modality, dom: TensorWord, cod: TensorWord) -> GeneratorSig {
    GeneratorSig {
        id: id.to_string(),
        kind: GenKind::Factitive { modality },
        dom,
        cod,
    }
}
