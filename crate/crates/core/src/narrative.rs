//! Role-indexed actants and narrative programs: the NP table, its canonical
//! form, the dependency relation, and formula notation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::instance::{load_instance, normalize_token, CsvSource, Instance, ABSENT, LIST_SEPARATOR};
use crate::schema::{builtin, ACTANT_VERTEX};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NarrativeError {
    #[error("unparseable actant `{0}` (expected `name_Role`)")]
    Unparseable(String),
    #[error("unknown role `{role}` in `{token}`")]
    UnknownRole { token: String, role: String },
    #[error("unknown junction type `{0}` (expected cap, cup, ∩ or ∪)")]
    UnknownJunction(String),
    #[error("actant instance must have a single `{ACTANT_VERTEX}` table")]
    NotAnActantInstance,
    #[error("{origin}:{line}: {message}")]
    Row {
        origin: String,
        line: u64,
        message: String,
    },
    #[error("dependency cycle {}", show_cycle(.0))]
    Cycle(Vec<String>),
    #[error("unknown NP id `{0}`")]
    UnknownNp(String),
    #[error(transparent)]
    Instance(#[from] crate::instance::InstanceError),
}

fn show_cycle(ids: &[String]) -> String {
    if ids.len() == 2 {
        format!("{}↔{}", ids[0], ids[1])
    } else {
        let mut parts = ids.to_vec();
        if let Some(first) = ids.first() {
            parts.push(first.clone());
        }
        parts.join("→")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    SubjectDoing,
    SubjectState,
    Object,
    Sender,
    Receiver,
    Helper,
    Opponent,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::SubjectDoing,
        Role::SubjectState,
        Role::Object,
        Role::Sender,
        Role::Receiver,
        Role::Helper,
        Role::Opponent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Role::SubjectDoing => "SubjectDoing",
            Role::SubjectState => "SubjectState",
            Role::Object => "Object",
            Role::Sender => "Sender",
            Role::Receiver => "Receiver",
            Role::Helper => "Helper",
            Role::Opponent => "Opponent",
        }
    }

    /// Short form used in compact diagram labels.
    pub fn abbreviation(self) -> &'static str {
        match self {
            Role::SubjectDoing => "SD",
            Role::SubjectState => "SS",
            Role::Object => "Obj",
            Role::Sender => "Snd",
            Role::Receiver => "Rcv",
            Role::Helper => "Hlp",
            Role::Opponent => "Opp",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| s.to_string())
    }
}

/// An entity in a role, written `entity_Role`. `Hare_SubjectDoing` and
/// `Hare_SubjectState` are different actants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Actant {
    pub entity: Arc<str>,
    pub role: Role,
}

impl Actant {
    pub fn new(entity: &str, role: Role) -> Self {
        Actant {
            entity: Arc::from(entity),
            role,
        }
    }

    /// Parse `entity_Role`; panics on malformed input. Meant for literals.
    pub fn lit(s: &str) -> Self {
        s.parse().unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for Actant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.entity, self.role)
    }
}

impl FromStr for Actant {
    type Err = NarrativeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let token = normalize_token(s);
        let (entity, role) = token
            .rsplit_once('_')
            .ok_or_else(|| NarrativeError::Unparseable(token.clone()))?;
        if entity.trim().is_empty() {
            return Err(NarrativeError::Unparseable(token.clone()));
        }
        let role = role.parse().map_err(|role| NarrativeError::UnknownRole {
            token: token.clone(),
            role,
        })?;
        Ok(Actant::new(entity, role))
    }
}

impl Serialize for Actant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Actant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JunctionType {
    Conjunction,
    Disjunction,
}

impl JunctionType {
    pub fn symbol(self) -> &'static str {
        match self {
            JunctionType::Conjunction => "∩",
            JunctionType::Disjunction => "∪",
        }
    }

    pub fn ascii(self) -> &'static str {
        match self {
            JunctionType::Conjunction => "cap",
            JunctionType::Disjunction => "cup",
        }
    }

    pub fn render(self, ascii: bool) -> &'static str {
        if ascii {
            self.ascii()
        } else {
            self.symbol()
        }
    }
}

impl fmt::Display for JunctionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for JunctionType {
    type Err = NarrativeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "cap" | "∩" => Ok(JunctionType::Conjunction),
            "cup" | "∪" => Ok(JunctionType::Disjunction),
            other => Err(NarrativeError::UnknownJunction(other.to_string())),
        }
    }
}

impl Serialize for JunctionType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.ascii())
    }
}

impl<'de> Deserialize<'de> for JunctionType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One row of the NP table. `actorializes` is in canonical form
/// `[S1, S2, X1, ..., Xk]` with `k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrativeProgram {
    pub id: String,
    pub source: String,
    pub junction: JunctionType,
    pub depends_on: Option<String>,
    pub actorializes: Vec<Actant>,
}

impl NarrativeProgram {
    pub fn subject_doing(&self) -> &Actant {
        &self.actorializes[0]
    }

    pub fn subject_state(&self) -> &Actant {
        &self.actorializes[1]
    }

    pub fn participants(&self) -> &[Actant] {
        &self.actorializes[2..]
    }
}

/// Check the canonical form of an actorialization list.
pub fn check_canonical(actorializes: &[Actant]) -> Result<(), String> {
    match actorializes.first() {
        None => return Err("canonical form: actorializes is empty".into()),
        Some(a) if a.role != Role::SubjectDoing => {
            return Err(format!(
                "canonical form: element 0 must be SubjectDoing, found `{a}`"
            ))
        }
        _ => {}
    }
    match actorializes.get(1) {
        None => return Err("canonical form: element 1 (SubjectState) is missing".into()),
        Some(a) if a.role != Role::SubjectState => {
            return Err(format!(
                "canonical form: element 1 must be SubjectState, found `{a}`"
            ))
        }
        _ => {}
    }
    if actorializes.len() < 3 {
        return Err("canonical form: at least one junction participant is required".into());
    }
    Ok(())
}

/// The actants of a one-table instance over the collapsed schema.
pub fn derive_actants(inst: &Instance) -> Result<Vec<Actant>, NarrativeError> {
    if inst.schema.vertices.len() != 1 {
        return Err(NarrativeError::NotAnActantInstance);
    }
    let table = inst
        .table(ACTANT_VERTEX)
        .ok_or(NarrativeError::NotAnActantInstance)?;
    table.ids().iter().map(|id| id.parse()).collect()
}

/// Load a one-column actant table and parse its rows.
pub fn load_actants(source: &CsvSource) -> Result<Vec<Actant>, NarrativeError> {
    let schema = builtin("A_prime").expect("builtin exists");
    let files = BTreeMap::from([(ACTANT_VERTEX.to_string(), source.clone())]);
    let inst = load_instance(&schema, &files)?;
    derive_actants(&inst).map_err(|e| match e {
        NarrativeError::Unparseable(_) | NarrativeError::UnknownRole { .. } => NarrativeError::Row {
            origin: source.origin.clone(),
            line: 0,
            message: e.to_string(),
        },
        other => other,
    })
}

pub const NP_HEADER: [&str; 5] = [
    "ID",
    "isDiscoursivizationOf",
    "hasJunctionType",
    "dependsOn",
    "actorializes",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpCorpus {
    programs: Vec<NarrativeProgram>,
    actants: Vec<Actant>,
    index: HashMap<String, usize>,
}

/// Parse the NP table against a known set of actants.
pub fn parse_np_table(source: &CsvSource, actants: &[Actant]) -> Result<NpCorpus, NarrativeError> {
    let err = |line: u64, message: String| NarrativeError::Row {
        origin: source.origin.clone(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source.text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
    if header.iter().ne(NP_HEADER) {
        return Err(err(1, format!("header must be `{}`", NP_HEADER.join(","))));
    }

    let known: std::collections::HashSet<&Actant> = actants.iter().collect();
    let mut programs = Vec::new();
    let mut lines = Vec::new();
    let mut index = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(err(line, "empty NP id".into()));
        }
        if index.contains_key(&id) {
            return Err(err(line, format!("duplicate NP id `{id}`")));
        }
        let junction: JunctionType = record[2].parse().map_err(|e: NarrativeError| err(line, e.to_string()))?;
        let depends_on = match &record[3] {
            ABSENT => None,
            "" => return Err(err(line, "empty dependsOn cell (write `*` for none)".into())),
            d if d.contains(LIST_SEPARATOR) => {
                return Err(err(line, format!("`{d}`: at most one dependency")))
            }
            d => Some(d.to_string()),
        };
        let mut actorializes = Vec::new();
        for token in record[4].split(LIST_SEPARATOR) {
            let a: Actant = token.parse().map_err(|e: NarrativeError| err(line, e.to_string()))?;
            if !known.contains(&a) {
                return Err(err(line, format!("unknown actant `{a}`")));
            }
            actorializes.push(a);
        }
        check_canonical(&actorializes).map_err(|m| err(line, format!("{id}: {m}")))?;
        index.insert(id.clone(), programs.len());
        lines.push(line);
        programs.push(NarrativeProgram {
            id,
            source: record[1].to_string(),
            junction,
            depends_on,
            actorializes,
        });
    }

    for (p, line) in programs.iter().zip(&lines) {
        if let Some(d) = &p.depends_on {
            if !index.contains_key(d) {
                return Err(err(*line, format!("{} depends on unknown NP `{d}`", p.id)));
            }
        }
    }
    let corpus = NpCorpus {
        programs,
        actants: actants.to_vec(),
        index,
    };
    if let Some(cycle) = corpus.find_cycle() {
        return Err(NarrativeError::Cycle(cycle));
    }
    Ok(corpus)
}

/// How formulas are written.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FormulaStyle {
    /// Expand cited dependencies recursively instead of citing them by id.
    pub inline: bool,
    /// `->`, `cap` and `cup` instead of `→`, `∩` and `∪`.
    pub ascii: bool,
}

impl NpCorpus {
    pub fn programs(&self) -> &[NarrativeProgram] {
        &self.programs
    }

    pub fn actants(&self) -> &[Actant] {
        &self.actants
    }

    pub fn get(&self, id: &str) -> Option<&NarrativeProgram> {
        self.index.get(id).map(|&i| &self.programs[i])
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        for start in &self.programs {
            let mut path = vec![start.id.clone()];
            let mut cur = start;
            while let Some(next) = cur.depends_on.as_ref().and_then(|d| self.get(d)) {
                if next.id == start.id {
                    return Some(path);
                }
                if path.contains(&next.id) {
                    break;
                }
                path.push(next.id.clone());
                cur = next;
            }
        }
        None
    }

    /// Topological order with dependencies first; among ready programs,
    /// table order wins.
    pub fn dependency_order(&self) -> Vec<String> {
        let mut placed = vec![false; self.programs.len()];
        let mut order = Vec::with_capacity(self.programs.len());
        while order.len() < self.programs.len() {
            let next = self.programs.iter().enumerate().position(|(i, p)| {
                !placed[i]
                    && p.depends_on
                        .as_ref()
                        .is_none_or(|d| placed[self.index[d]])
            });
            let Some(i) = next else { break };
            placed[i] = true;
            order.push(self.programs[i].id.clone());
        }
        order
    }

    pub fn emit_formula(&self, id: &str, style: FormulaStyle) -> Result<String, NarrativeError> {
        let p = self.get(id).ok_or_else(|| NarrativeError::UnknownNp(id.to_string()))?;
        let body = basic_formula(p, style.ascii);
        Ok(match &p.depends_on {
            None => body,
            Some(d) if style.inline => format!("{{{} {body}}}", self.emit_formula(d, style)?),
            Some(d) => format!("{{{d} {body}}}"),
        })
    }

    /// Canonical NP table text.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(NP_HEADER).expect("write to memory");
        for p in &self.programs {
            let acts = p
                .actorializes
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                p.id.as_str(),
                p.source.as_str(),
                p.junction.ascii(),
                p.depends_on.as_deref().unwrap_or(ABSENT),
                acts.as_str(),
            ])
            .expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
    }
}

fn basic_formula(p: &NarrativeProgram, ascii: bool) -> String {
    let arrow = if ascii { "->" } else { "→" };
    let names: Vec<&str> = p.participants().iter().map(|a| a.entity.as_ref()).collect();
    let x = if names.len() == 1 {
        names[0].to_string()
    } else {
        format!("{{{}}}", names.join(", "))
    };
    format!(
        "{{{} {arrow} ({} {} {x})}}",
        p.subject_doing().entity,
        p.subject_state().entity,
        p.junction.render(ascii)
    )
}
