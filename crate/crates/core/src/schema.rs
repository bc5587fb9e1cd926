//! Categorical schemas (ologs): a directed multigraph with labelled vertices
//! and arrows plus a finite list of declared path equivalences.
//!
//! Paths are written in traversal order: `[a4, a3]` means "follow `a4`, then
//! `a3`", i.e. the composite usually written `a3 ∘ a4`. Identity arrows are
//! implicit and never stored.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kleisli::MonadKind;
use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("unknown builtin schema `{0}` (expected one of A, A_refined, A_prime, N)")]
    UnknownBuiltin(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` already exists")]
    VertexCollision(String),
    #[error("malformed schema document: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDecl {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDecl {
    pub id: String,
    pub label: String,
    pub source: String,
    pub target: String,
    /// Kleisli reading of the arrow, when its cells are lists or optional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monad: Option<MonadKind>,
}

impl ArrowDecl {
    pub fn is_monadic(&self) -> bool {
        self.monad.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathEquivalence {
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub name: String,
    pub vertices: Vec<VertexDecl>,
    pub arrows: Vec<ArrowDecl>,
    pub equivalences: Vec<PathEquivalence>,
}

/// The four schemas used to model actants and narrative programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// The actantial model: sender, object, receiver, subject, helper, opponent.
    A,
    /// The discrete refinement splitting the subject into doing/state.
    ARefined,
    /// The one-object collapse, "an actant".
    APrime,
    /// Narrative programs.
    N,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::A, Builtin::ARefined, Builtin::APrime, Builtin::N];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::A => "A",
            Builtin::ARefined => "A_refined",
            Builtin::APrime => "A_prime",
            Builtin::N => "N",
        }
    }

    pub fn schema(self) -> Schema {
        match self {
            Builtin::A => actantial_model(),
            Builtin::ARefined => refine_to_discrete(&actantial_model(), "D", subject_split())
                .expect("builtin refinement is well formed"),
            Builtin::APrime => actant_schema(),
            Builtin::N => narrative_schema(),
        }
    }
}

impl FromStr for Builtin {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| SchemaError::UnknownBuiltin(s.to_string()))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn builtin(name: &str) -> Result<Schema, SchemaError> {
    Ok(name.parse::<Builtin>()?.schema())
}

fn vertex(id: &str, label: &str) -> VertexDecl {
    VertexDecl {
        id: id.to_string(),
        label: label.to_string(),
    }
}

fn arrow(id: &str, label: &str, source: &str, target: &str) -> ArrowDecl {
    ArrowDecl {
        id: id.to_string(),
        label: label.to_string(),
        source: source.to_string(),
        target: target.to_string(),
        monad: None,
    }
}

fn path(ids: &[&str]) -> Vec<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

fn actantial_model() -> Schema {
    Schema {
        name: "A".to_string(),
        vertices: vec![
            vertex("A", "a sender"),
            vertex("B", "an object"),
            vertex("C", "a receiver"),
            vertex("D", "a subject"),
            vertex("E", "a helper"),
            vertex("F", "an opponent"),
        ],
        arrows: vec![
            arrow("a1", "contractualizes", "A", "B"),
            arrow("a2", "inherits", "C", "B"),
            arrow("a3", "seeks to conjoin with", "D", "B"),
            arrow("a4", "assists", "E", "D"),
            arrow("a5", "hinders", "F", "D"),
            arrow("a6", "assists a conjunction with", "E", "B"),
            arrow("a7", "hinders a conjunction with", "F", "B"),
        ],
        equivalences: vec![
            PathEquivalence {
                lhs: path(&["a4", "a3"]),
                rhs: path(&["a6"]),
            },
            PathEquivalence {
                lhs: path(&["a5", "a3"]),
                rhs: path(&["a7"]),
            },
        ],
    }
}

fn subject_split() -> Vec<VertexDecl> {
    vec![
        vertex("S1", "a subject of doing"),
        vertex("S2", "a subject of state"),
    ]
}

/// Id of the single vertex of `A_prime`.
pub const ACTANT_VERTEX: &str = "a";

fn actant_schema() -> Schema {
    Schema {
        name: "A_prime".to_string(),
        vertices: vec![vertex(ACTANT_VERTEX, "an actant")],
        arrows: vec![],
        equivalences: vec![],
    }
}

fn narrative_schema() -> Schema {
    let mut actorializes = arrow("actorializes", "actorializes", "P", ACTANT_VERTEX);
    actorializes.monad = Some(MonadKind::List);
    let mut depends_on = arrow("dependsOn", "depends on", "P", "P");
    depends_on.monad = Some(MonadKind::Maybe);
    Schema {
        name: "N".to_string(),
        vertices: vec![
            vertex("P", "a narrative program"),
            vertex(ACTANT_VERTEX, "an actant"),
            vertex("M", "a mode"),
            vertex("S", "a source text"),
        ],
        arrows: vec![
            actorializes,
            arrow("hasJunctionType", "has junction type", "P", "M"),
            arrow("isDiscoursivizationOf", "is discoursivization of", "P", "S"),
            depends_on,
        ],
        equivalences: vec![],
    }
}

impl Schema {
    pub fn empty(name: impl Into<String>) -> Self {
        Schema {
            name: name.into(),
            vertices: vec![],
            arrows: vec![],
            equivalences: vec![],
        }
    }

    pub fn vertex(&self, id: &str) -> Option<&VertexDecl> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn arrow(&self, id: &str) -> Option<&ArrowDecl> {
        self.arrows.iter().find(|a| a.id == id)
    }

    /// Arrows leaving `vertex`, in declaration order.
    pub fn out_arrows<'a>(&'a self, vertex: &'a str) -> impl Iterator<Item = &'a ArrowDecl> + 'a {
        self.arrows.iter().filter(move |a| a.source == vertex)
    }

    /// Source and target of a composable, non-empty path.
    pub fn path_endpoints(&self, path: &[String]) -> Option<(&str, &str)> {
        let mut arrows = path.iter().map(|id| self.arrow(id));
        let first = arrows.next()??;
        let mut target = first.target.as_str();
        for next in arrows {
            let next = next?;
            if next.source != target {
                return None;
            }
            target = next.target.as_str();
        }
        Some((first.source.as_str(), target))
    }

    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical text form: two-space indented JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("schema serializes");
        out.push('\n');
        out
    }
}

pub fn validate_schema(schema: &Schema) -> ValidationReport {
    let mut report = ValidationReport::new();

    let mut seen = HashSet::new();
    for v in &schema.vertices {
        let loc = format!("vertex:{}", v.id);
        if v.id.trim().is_empty() {
            report.error(&loc, "empty vertex id");
        }
        if !seen.insert(v.id.as_str()) {
            report.error(&loc, "duplicate vertex id");
        }
        if v.label.trim().is_empty() {
            report.error(&loc, "empty label");
        }
    }

    let vertex_ids: HashSet<&str> = schema.vertices.iter().map(|v| v.id.as_str()).collect();
    let mut seen = HashSet::new();
    for a in &schema.arrows {
        let loc = format!("arrow:{}", a.id);
        if a.id.trim().is_empty() {
            report.error(&loc, "empty arrow id");
        }
        if !seen.insert(a.id.as_str()) {
            report.error(&loc, "duplicate arrow id");
        }
        if a.label.trim().is_empty() {
            report.error(&loc, "empty label");
        }
        for (end, v) in [("source", &a.source), ("target", &a.target)] {
            if v.is_empty() {
                report.error(&loc, format!("{end} unset"));
            } else if !vertex_ids.contains(v.as_str()) {
                report.error(&loc, format!("{end} `{v}` is not a vertex"));
            }
        }
    }

    let arrows: HashMap<&str, &ArrowDecl> =
        schema.arrows.iter().map(|a| (a.id.as_str(), a)).collect();
    for (k, eq) in schema.equivalences.iter().enumerate() {
        let loc = format!("equivalence:{k}");
        let mut endpoints = Vec::with_capacity(2);
        for (side, path) in [("lhs", &eq.lhs), ("rhs", &eq.rhs)] {
            match check_path(&arrows, path) {
                Ok(ends) => endpoints.push(ends),
                Err(msg) => report.error(&loc, format!("{side}: {msg}")),
            }
        }
        if let [(ls, lt), (rs, rt)] = endpoints[..] {
            if ls != rs || lt != rt {
                report.error(
                    &loc,
                    format!(
                        "endpoint mismatch: lhs runs {ls} -> {lt}, rhs runs {rs} -> {rt}"
                    ),
                );
            }
        }
    }

    report.sorted()
}

fn check_path<'a>(
    arrows: &HashMap<&str, &'a ArrowDecl>,
    path: &[String],
) -> Result<(&'a str, &'a str), String> {
    let Some(first) = path.first() else {
        return Err("empty path".to_string());
    };
    let lookup = |id: &str| {
        arrows
            .get(id)
            .copied()
            .ok_or_else(|| format!("unknown arrow `{id}`"))
    };
    let first = lookup(first)?;
    let mut target = first.target.as_str();
    for (i, id) in path.iter().enumerate().skip(1) {
        let a = lookup(id)?;
        if a.source != target {
            return Err(format!(
                "not composable at step {i}: `{}` starts at {} but the path is at {target}",
                a.id, a.source
            ));
        }
        target = a.target.as_str();
    }
    Ok((first.source.as_str(), target))
}

/// Drop one vertex and every arrow and equivalence, then add new vertices.
/// The result is a discrete schema (identities only).
pub fn refine_to_discrete(
    schema: &Schema,
    drop: &str,
    add: Vec<VertexDecl>,
) -> Result<Schema, SchemaError> {
    if schema.vertex(drop).is_none() {
        return Err(SchemaError::UnknownVertex(drop.to_string()));
    }
    let mut vertices: Vec<VertexDecl> = schema
        .vertices
        .iter()
        .filter(|v| v.id != drop)
        .cloned()
        .collect();
    for v in add {
        if vertices.iter().any(|w| w.id == v.id) {
            return Err(SchemaError::VertexCollision(v.id));
        }
        vertices.push(v);
    }
    Ok(Schema {
        name: format!("{}_refined", schema.name),
        vertices,
        arrows: vec![],
        equivalences: vec![],
    })
}

/// The constant functor onto the one-object schema `A_prime`: returns that
/// schema together with the object map (every vertex goes to `a`).
pub fn collapse(schema: &Schema) -> (Schema, BTreeMap<String, String>) {
    let map = schema
        .vertices
        .iter()
        .map(|v| (v.id.clone(), ACTANT_VERTEX.to_string()))
        .collect();
    (actant_schema(), map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_a_shape() {
        let a = builtin("A").unwrap();
        assert_eq!(a.vertices.len(), 6);
        assert_eq!(a.arrows.len(), 7);
        assert_eq!(a.equivalences.len(), 2);
        assert!(validate_schema(&a).is_empty());
    }

    #[test]
    fn builtin_shapes() {
        let p = builtin("A_prime").unwrap();
        assert_eq!((p.vertices.len(), p.arrows.len()), (1, 0));
        assert_eq!(p.vertices[0].label, "an actant");

        let r = builtin("A_refined").unwrap();
        let ids: Vec<_> = r.vertices.iter().map(|v| v.id.as_str()).collect();
        assert_eq!(ids, ["A", "B", "C", "E", "F", "S1", "S2"]);
        assert!(r.arrows.is_empty());

        let n = builtin("N").unwrap();
        assert_eq!(n.arrow("actorializes").unwrap().monad, Some(MonadKind::List));
        assert_eq!(n.arrow("dependsOn").unwrap().monad, Some(MonadKind::Maybe));
        assert_eq!(n.arrow("dependsOn").unwrap().source, "P");
        assert_eq!(n.arrow("dependsOn").unwrap().target, "P");
        for b in Builtin::ALL {
            assert!(validate_schema(&b.schema()).is_empty(), "{b}");
        }
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(builtin("Q"), Err(SchemaError::UnknownBuiltin(_))));
    }

    #[test]
    fn empty_schema_is_valid() {
        assert!(validate_schema(&Schema::empty("empty")).is_empty());
    }

    #[test]
    fn endpoint_mismatch_is_reported() {
        // a3 ∘ a5 runs F -> B, a6 runs E -> B.
        let mut a = builtin("A").unwrap();
        a.equivalences.push(PathEquivalence {
            lhs: path(&["a5", "a3"]),
            rhs: path(&["a6"]),
        });
        let report = validate_schema(&a);
        assert_eq!(report.len(), 1);
        assert_eq!(report.findings[0].location, "equivalence:2");
        assert!(report.findings[0].message.contains("endpoint mismatch"));
        assert!(report.findings[0].message.contains("F -> B"));
        assert!(report.findings[0].message.contains("E -> B"));
    }

    #[test]
    fn non_composable_path_is_reported() {
        let mut a = builtin("A").unwrap();
        a.equivalences.push(PathEquivalence {
            lhs: path(&["a3", "a5"]),
            rhs: path(&["a6"]),
        });
        let report = validate_schema(&a);
        assert_eq!(report.len(), 1);
        assert!(report.findings[0].message.contains("not composable"));
    }

    #[test]
    fn structural_findings() {
        let mut s = builtin("A").unwrap();
        s.vertices.push(vertex("A", ""));
        s.arrows.push(arrow("a1", "again", "A", "Z"));
        s.equivalences.push(PathEquivalence {
            lhs: vec![],
            rhs: path(&["nope"]),
        });
        let report = validate_schema(&s);
        let msgs: Vec<String> = report.findings.iter().map(|f| f.to_string()).collect();
        assert!(msgs.iter().any(|m| m.contains("vertex:A: duplicate vertex id")));
        assert!(msgs.iter().any(|m| m.contains("vertex:A: empty label")));
        assert!(msgs.iter().any(|m| m.contains("arrow:a1: duplicate arrow id")));
        assert!(msgs.iter().any(|m| m.contains("target `Z` is not a vertex")));
        assert!(msgs.iter().any(|m| m.contains("lhs: empty path")));
        assert!(msgs.iter().any(|m| m.contains("rhs: unknown arrow `nope`")));
    }

    #[test]
    fn refine_a_matches_builtin() {
        let a = builtin("A").unwrap();
        let refined = refine_to_discrete(&a, "D", subject_split()).unwrap();
        assert_eq!(refined, builtin("A_refined").unwrap());
    }

    #[test]
    fn refine_errors_and_identity() {
        let a = builtin("A").unwrap();
        assert!(matches!(
            refine_to_discrete(&a, "Z", vec![]),
            Err(SchemaError::UnknownVertex(_))
        ));
        assert!(matches!(
            refine_to_discrete(&a, "D", vec![vertex("B", "dup")]),
            Err(SchemaError::VertexCollision(_))
        ));
        let p = builtin("A_prime").unwrap();
        let same = refine_to_discrete(&p, "a", vec![vertex("a", "an actant")]).unwrap();
        assert_eq!(same.vertices, p.vertices);
        assert!(same.arrows.is_empty());
    }

    #[test]
    fn collapse_counts() {
        let (target, map) = collapse(&builtin("A_refined").unwrap());
        assert_eq!(target, builtin("A_prime").unwrap());
        assert_eq!(map.len(), 7);
        assert!(map.values().all(|v| v == "a"));

        let (_, map) = collapse(&builtin("A").unwrap());
        assert_eq!(map.len(), 6);

        let p = builtin("A_prime").unwrap();
        let (again, map) = collapse(&p);
        assert_eq!(again, p);
        assert_eq!(map.into_iter().collect::<Vec<_>>(), [("a".into(), "a".into())]);
    }

    #[test]
    fn refine_then_collapse_agrees_with_collapse() {
        let a = builtin("A").unwrap();
        let (direct, direct_map) = collapse(&a);
        let (via, via_map) = collapse(&refine_to_discrete(&a, "D", subject_split()).unwrap());
        assert_eq!(direct, via);
        // Composite object maps agree on every surviving vertex.
        for (v, image) in &via_map {
            if let Some(d) = direct_map.get(v) {
                assert_eq!(d, image);
            }
        }
    }

    #[test]
    fn builtins_round_trip_through_json() {
        for b in Builtin::ALL {
            let s = b.schema();
            let text = s.to_json();
            let back = Schema::from_json(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn monad_annotation_is_lowercase_in_json() {
        let text = builtin("N").unwrap().to_json();
        assert!(text.contains("\"monad\": \"list\""));
        assert!(text.contains("\"monad\": \"maybe\""));
    }
}
