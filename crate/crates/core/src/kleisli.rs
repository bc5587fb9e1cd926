//! The List and Maybe monads on finite sets, Kleisli composition, and an
//! exhaustive law checker over small enumerated carriers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Atom = Arc<str>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KleisliError {
    #[error("duplicate atom `{0}` in finite set")]
    DuplicateAtom(String),
    #[error("function is not total: no value for `{0}`")]
    NotTotal(String),
    #[error("`{0}` is not in the domain")]
    NotInDomain(String),
    #[error("value {value} for `{atom}` is outside the codomain")]
    OutsideCodomain { atom: String, value: String },
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("{monad}: expected a lifted value, found {value}")]
    Shape { monad: MonadKind, value: String },
}

/// A nested value over atoms. `List` and `Absent`/`Present` are the two
/// monads' constructors; nesting depth is whatever the caller builds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Atom(Atom),
    List(Vec<Value>),
    Absent,
    Present(Box<Value>),
}

impl Value {
    pub fn atom(s: &str) -> Value {
        Value::Atom(Arc::from(s))
    }

    pub fn list<I: IntoIterator<Item = Value>>(items: I) -> Value {
        Value::List(items.into_iter().collect())
    }

    pub fn present(v: Value) -> Value {
        Value::Present(Box::new(v))
    }

    /// Number of atoms anywhere inside the value.
    pub fn atom_count(&self) -> usize {
        match self {
            Value::Atom(_) => 1,
            Value::List(items) => items.iter().map(Value::atom_count).sum(),
            Value::Absent => 0,
            Value::Present(v) => v.atom_count(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) => f.write_str(a),
            Value::List(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            Value::Absent => f.write_str("*"),
            Value::Present(v) => write!(f, "just({v})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonadKind {
    List,
    Maybe,
}

impl fmt::Display for MonadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadKind::List => f.write_str("List"),
            MonadKind::Maybe => f.write_str("Maybe"),
        }
    }
}

/// A finite set of atoms, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elements: Vec<Atom>,
}

impl FinSet {
    pub fn new<I, S>(elements: I) -> Result<Self, KleisliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut elements: Vec<Atom> = elements.into_iter().map(|s| Arc::from(s.as_ref())).collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(KleisliError::DuplicateAtom(w[0].to_string()));
        }
        Ok(FinSet { elements })
    }

    /// `{a, b, c, ...}` with `n` elements.
    pub fn standard(n: usize) -> Self {
        let elements = (0..n)
            .map(|i| {
                let c = char::from(b'a' + (i % 26) as u8);
                if i < 26 {
                    Arc::from(c.to_string())
                } else {
                    Arc::from(format!("{c}{}", i / 26))
                }
            })
            .collect::<Vec<Atom>>();
        FinSet::new(elements.iter().map(|a| a.as_ref())).expect("distinct by construction")
    }

    pub fn elements(&self) -> &[Atom] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.elements.binary_search_by(|a| a.as_ref().cmp(atom)).is_ok()
    }

    pub fn values(&self) -> Vec<Value> {
        self.elements.iter().cloned().map(Value::Atom).collect()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.join(", "))
    }
}

type UnitFn = fn(Value) -> Value;
type JoinFn = fn(&Value) -> Result<Value, KleisliError>;

/// Unit and join for one of the two monads. Functorial map is structural and
/// fixed by `kind`; unit and join are replaceable so the law checker can be
/// pointed at deliberately broken variants.
#[derive(Clone)]
pub struct MonadSpec {
    pub kind: MonadKind,
    pub name: String,
    unit: UnitFn,
    join: JoinFn,
}

impl fmt::Debug for MonadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonadSpec")
            .field("kind", &self.kind)
            .field("name", &self.name)
            .finish()
    }
}

fn list_unit(v: Value) -> Value {
    Value::List(vec![v])
}

fn list_join(v: &Value) -> Result<Value, KleisliError> {
    let outer = expect_list(v)?;
    let mut out = Vec::new();
    for inner in outer {
        out.extend(expect_list(inner)?.iter().cloned());
    }
    Ok(Value::List(out))
}

fn maybe_unit(v: Value) -> Value {
    Value::Present(Box::new(v))
}

fn maybe_join(v: &Value) -> Result<Value, KleisliError> {
    match v {
        Value::Absent => Ok(Value::Absent),
        Value::Present(inner) => match inner.as_ref() {
            Value::Absent => Ok(Value::Absent),
            Value::Present(x) => Ok(Value::Present(x.clone())),
            other => Err(shape(MonadKind::Maybe, other)),
        },
        other => Err(shape(MonadKind::Maybe, other)),
    }
}

fn expect_list(v: &Value) -> Result<&[Value], KleisliError> {
    match v {
        Value::List(items) => Ok(items),
        other => Err(shape(MonadKind::List, other)),
    }
}

fn shape(monad: MonadKind, value: &Value) -> KleisliError {
    KleisliError::Shape {
        monad,
        value: value.to_string(),
    }
}

impl MonadSpec {
    pub fn list() -> Self {
        MonadSpec {
            kind: MonadKind::List,
            name: "List".to_string(),
            unit: list_unit,
            join: list_join,
        }
    }

    pub fn maybe() -> Self {
        MonadSpec {
            kind: MonadKind::Maybe,
            name: "Maybe".to_string(),
            unit: maybe_unit,
            join: maybe_join,
        }
    }

    pub fn for_kind(kind: MonadKind) -> Self {
        match kind {
            MonadKind::List => Self::list(),
            MonadKind::Maybe => Self::maybe(),
        }
    }

    /// Same monad with its multiplication swapped out.
    pub fn with_join(mut self, name: impl Into<String>, join: JoinFn) -> Self {
        self.name = name.into();
        self.join = join;
        self
    }

    pub fn unit(&self, v: Value) -> Value {
        (self.unit)(v)
    }

    pub fn join(&self, v: &Value) -> Result<Value, KleisliError> {
        (self.join)(v)
    }

    /// `T(f)` applied to a lifted value.
    pub fn fmap<F>(&self, v: &Value, mut f: F) -> Result<Value, KleisliError>
    where
        F: FnMut(&Value) -> Result<Value, KleisliError>,
    {
        match (self.kind, v) {
            (MonadKind::List, Value::List(items)) => {
                Ok(Value::List(items.iter().map(&mut f).collect::<Result<_, _>>()?))
            }
            (MonadKind::Maybe, Value::Absent) => Ok(Value::Absent),
            (MonadKind::Maybe, Value::Present(x)) => Ok(Value::Present(Box::new(f(x)?))),
            (kind, other) => Err(shape(kind, other)),
        }
    }

    /// `μ ∘ T(g)` applied to `fx`: the pointwise Kleisli composite.
    pub fn bind<F>(&self, fx: &Value, g: F) -> Result<Value, KleisliError>
    where
        F: FnMut(&Value) -> Result<Value, KleisliError>,
    {
        self.join(&self.fmap(fx, g)?)
    }

    /// Every value of `T(carrier)` within the enumeration bound. For List
    /// that is every list of length at most `max_len` whose nested atom count
    /// is also at most `max_len`; Maybe ignores the bound.
    pub fn lift(&self, carrier: &[Value], max_len: usize) -> Vec<Value> {
        match self.kind {
            MonadKind::Maybe => std::iter::once(Value::Absent)
                .chain(carrier.iter().cloned().map(|v| Value::Present(Box::new(v))))
                .collect(),
            MonadKind::List => {
                let mut out = Vec::new();
                let mut current = Vec::new();
                enumerate_lists(carrier, max_len, 0, &mut current, &mut out);
                out
            }
        }
    }

    /// Whether `v` is a well-formed element of `T(carrier)`.
    pub fn is_lifted_over(&self, v: &Value, carrier: &FinSet) -> bool {
        let member = |x: &Value| matches!(x, Value::Atom(a) if carrier.contains(a));
        match (self.kind, v) {
            (MonadKind::List, Value::List(items)) => items.iter().all(member),
            (MonadKind::Maybe, Value::Absent) => true,
            (MonadKind::Maybe, Value::Present(x)) => member(x),
            _ => false,
        }
    }
}

fn enumerate_lists(
    carrier: &[Value],
    max_len: usize,
    atoms: usize,
    current: &mut Vec<Value>,
    out: &mut Vec<Value>,
) {
    out.push(Value::List(current.clone()));
    if current.len() == max_len {
        return;
    }
    for v in carrier {
        let n = atoms + v.atom_count();
        if n <= max_len {
            current.push(v.clone());
            enumerate_lists(carrier, max_len, n, current, out);
            current.pop();
        }
    }
}

/// Broken multiplications used to check that the law harness has teeth.
pub mod mutants {
    use super::*;

    /// Concatenates, then drops the final element.
    pub fn list_join_drop_last(v: &Value) -> Result<Value, KleisliError> {
        let Value::List(mut items) = list_join(v)? else {
            unreachable!()
        };
        items.pop();
        Ok(Value::List(items))
    }

    /// Concatenates the inner lists in reverse order.
    pub fn list_join_reversed(v: &Value) -> Result<Value, KleisliError> {
        let outer = expect_list(v)?;
        let mut out = Vec::new();
        for inner in outer.iter().rev() {
            out.extend(expect_list(inner)?.iter().cloned());
        }
        Ok(Value::List(out))
    }

    /// Concatenates, keeping only the first occurrence of each element.
    pub fn list_join_dedup(v: &Value) -> Result<Value, KleisliError> {
        let Value::List(items) = list_join(v)? else {
            unreachable!()
        };
        let mut out: Vec<Value> = Vec::with_capacity(items.len());
        for x in items {
            if !out.contains(&x) {
                out.push(x);
            }
        }
        Ok(Value::List(out))
    }

    /// Forgets everything.
    pub fn maybe_join_always_absent(v: &Value) -> Result<Value, KleisliError> {
        maybe_join(v).map(|_| Value::Absent)
    }

    pub fn all() -> Vec<MonadSpec> {
        vec![
            MonadSpec::list().with_join("List/drop-last", list_join_drop_last),
            MonadSpec::list().with_join("List/reversed", list_join_reversed),
            MonadSpec::list().with_join("List/dedup", list_join_dedup),
            MonadSpec::maybe().with_join("Maybe/always-absent", maybe_join_always_absent),
        ]
    }
}

/// The lifted side of a finite function: plain `Y` or `T(Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Codomain {
    Plain(FinSet),
    Lifted { monad: MonadKind, carrier: FinSet },
}

/// A total function on a finite domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFun {
    domain: FinSet,
    codomain: Codomain,
    table: BTreeMap<Atom, Value>,
}

impl FinFun {
    pub fn new<I, S>(domain: FinSet, codomain: Codomain, table: I) -> Result<Self, KleisliError>
    where
        I: IntoIterator<Item = (S, Value)>,
        S: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in table {
            let k = k.as_ref();
            if !domain.contains(k) {
                return Err(KleisliError::NotInDomain(k.to_string()));
            }
            let ok = match &codomain {
                Codomain::Plain(y) => matches!(&v, Value::Atom(a) if y.contains(a)),
                Codomain::Lifted { monad, carrier } => {
                    MonadSpec::for_kind(*monad).is_lifted_over(&v, carrier)
                }
            };
            if !ok {
                return Err(KleisliError::OutsideCodomain {
                    atom: k.to_string(),
                    value: v.to_string(),
                });
            }
            map.insert(Arc::from(k), v);
        }
        if let Some(missing) = domain.elements().iter().find(|a| !map.contains_key(*a)) {
            return Err(KleisliError::NotTotal(missing.to_string()));
        }
        Ok(FinFun {
            domain,
            codomain,
            table: map,
        })
    }

    /// A Kleisli arrow `X → T(Y)`.
    pub fn kleisli<I, S>(
        monad: MonadKind,
        domain: FinSet,
        target: FinSet,
        table: I,
    ) -> Result<Self, KleisliError>
    where
        I: IntoIterator<Item = (S, Value)>,
        S: AsRef<str>,
    {
        FinFun::new(
            domain,
            Codomain::Lifted {
                monad,
                carrier: target,
            },
            table,
        )
    }

    /// The unit `X → T(X)` as a Kleisli arrow.
    pub fn unit(monad: &MonadSpec, domain: FinSet) -> Self {
        let table: Vec<(Atom, Value)> = domain
            .elements()
            .iter()
            .map(|a| (a.clone(), monad.unit(Value::Atom(a.clone()))))
            .collect();
        FinFun {
            codomain: Codomain::Lifted {
                monad: monad.kind,
                carrier: domain.clone(),
            },
            domain,
            table: table.into_iter().collect(),
        }
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &Codomain {
        &self.codomain
    }

    pub fn apply(&self, atom: &str) -> Option<&Value> {
        self.table.get(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Value)> {
        self.table.iter()
    }
}

/// `g ∘ f := μ_Z ∘ T(g) ∘ f` for `f: X → T(Y)` and `g: Y → T(Z)`.
pub fn kleisli_compose(monad: &MonadSpec, f: &FinFun, g: &FinFun) -> Result<FinFun, KleisliError> {
    let (f_kind, y) = match &f.codomain {
        Codomain::Lifted { monad, carrier } => (*monad, carrier),
        Codomain::Plain(_) => {
            return Err(KleisliError::CarrierMismatch(
                "first arrow is not a Kleisli arrow".into(),
            ))
        }
    };
    let (g_kind, z) = match &g.codomain {
        Codomain::Lifted { monad, carrier } => (*monad, carrier),
        Codomain::Plain(_) => {
            return Err(KleisliError::CarrierMismatch(
                "second arrow is not a Kleisli arrow".into(),
            ))
        }
    };
    if f_kind != monad.kind || g_kind != monad.kind {
        return Err(KleisliError::CarrierMismatch(format!(
            "arrows are {f_kind}/{g_kind}-valued, composing in {}",
            monad.kind
        )));
    }
    if y != &g.domain {
        return Err(KleisliError::CarrierMismatch(format!(
            "codomain carrier {y} differs from domain {}",
            g.domain
        )));
    }
    let mut table = BTreeMap::new();
    for (x, fx) in &f.table {
        let v = monad.bind(fx, |y| apply_to_atom(g, y))?;
        table.insert(x.clone(), v);
    }
    Ok(FinFun {
        domain: f.domain.clone(),
        codomain: Codomain::Lifted {
            monad: monad.kind,
            carrier: z.clone(),
        },
        table,
    })
}

fn apply_to_atom(g: &FinFun, v: &Value) -> Result<Value, KleisliError> {
    match v {
        Value::Atom(a) => g
            .apply(a)
            .cloned()
            .ok_or_else(|| KleisliError::NotInDomain(a.to_string())),
        other => Err(KleisliError::NotInDomain(other.to_string())),
    }
}

pub fn unit(monad: &MonadSpec, x: &str) -> Value {
    monad.unit(Value::atom(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    /// `μ ∘ T(η) = id`
    LeftUnit,
    /// `μ ∘ η_T = id`
    RightUnit,
    /// `μ ∘ μ_T = μ ∘ T(μ)`
    Associativity,
    /// `f ∘ η = f`
    KleisliLeftUnit,
    /// `η ∘ f = f`
    KleisliRightUnit,
    /// `(h ∘ g) ∘ f = h ∘ (g ∘ f)`
    KleisliAssociativity,
}

impl Law {
    pub const ALL: [Law; 6] = [
        Law::LeftUnit,
        Law::RightUnit,
        Law::Associativity,
        Law::KleisliLeftUnit,
        Law::KleisliRightUnit,
        Law::KleisliAssociativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::LeftUnit => "left unit",
            Law::RightUnit => "right unit",
            Law::Associativity => "associativity",
            Law::KleisliLeftUnit => "kleisli left unit",
            Law::KleisliRightUnit => "kleisli right unit",
            Law::KleisliAssociativity => "kleisli associativity",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Law,
    pub carrier: String,
    pub witness: String,
}

/// Outcome of an exhaustive law check. Only the first few witnesses per law
/// are kept; the counts are exact.
#[derive(Debug, Clone, Default)]
pub struct LawReport {
    pub monad: String,
    pub checked: BTreeMap<Law, u64>,
    pub violated: BTreeMap<Law, u64>,
    pub examples: Vec<LawViolation>,
}

const EXAMPLES_PER_LAW: usize = 3;

impl LawReport {
    pub fn is_empty(&self) -> bool {
        self.violated.values().all(|&n| n == 0)
    }

    pub fn violations(&self, law: Law) -> u64 {
        self.violated.get(&law).copied().unwrap_or(0)
    }

    pub fn violated_laws(&self) -> Vec<Law> {
        self.violated
            .iter()
            .filter(|(_, &n)| n > 0)
            .map(|(l, _)| *l)
            .collect()
    }

    fn record(&mut self, law: Law, ok: bool, carrier: &dyn fmt::Display, witness: impl FnOnce() -> String) {
        self.record_many(law, ok, 1, carrier, witness);
    }

    /// Record `times` cases that share one outcome.
    fn record_many(
        &mut self,
        law: Law,
        ok: bool,
        times: u64,
        carrier: &dyn fmt::Display,
        witness: impl FnOnce() -> String,
    ) {
        if times == 0 {
            return;
        }
        *self.checked.entry(law).or_default() += times;
        if ok {
            return;
        }
        *self.violated.entry(law).or_default() += times;
        if self.examples.iter().filter(|e| e.law == law).count() < EXAMPLES_PER_LAW {
            self.examples.push(LawViolation {
                law,
                carrier: carrier.to_string(),
                witness: witness(),
            });
        }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "monad {}", self.monad)?;
        for law in Law::ALL {
            let checked = self.checked.get(&law).copied().unwrap_or(0);
            let bad = self.violations(law);
            let status = if bad == 0 { "ok" } else { "VIOLATED" };
            writeln!(f, "  {:<22} {status:<8} {bad} of {checked} cases", law.name())?;
        }
        for v in &self.examples {
            writeln!(f, "  {} over {}: {}", v.law, v.carrier, v.witness)?;
        }
        if self.is_empty() {
            writeln!(f, "0 violations")
        } else {
            let total: u64 = self.violated.values().sum();
            writeln!(f, "{total} violation(s)")
        }
    }
}

/// Largest carrier used for the Kleisli arrow checks.
pub const KLEISLI_CARRIER_MAX: usize = 2;

/// Check the monad laws on every enumerated value over each carrier, and the
/// Kleisli unit and associativity laws on every enumerated arrow (and
/// composable triple of arrows) between carriers of at most two atoms.
pub fn check_monad_laws(monad: &MonadSpec, carriers: &[FinSet], max_list_len: usize) -> LawReport {
    let mut report = LawReport {
        monad: monad.name.clone(),
        ..Default::default()
    };
    for law in Law::ALL {
        report.checked.insert(law, 0);
        report.violated.insert(law, 0);
    }

    for carrier in carriers {
        check_structure_laws(monad, carrier, max_list_len, &mut report);
    }

    let small: Vec<&FinSet> = carriers
        .iter()
        .filter(|c| c.len() <= KLEISLI_CARRIER_MAX)
        .collect();
    let tables: Vec<ArrowTable> = small
        .iter()
        .map(|y| ArrowTable::new(monad, y, max_list_len))
        .collect();

    for x in &small {
        for (yi, _) in small.iter().enumerate() {
            check_kleisli_units(monad, x, &tables[yi], &mut report);
        }
    }
    // Associativity at a point depends on the domain only through how many
    // (f, a) pairs share the value f(a).
    for y in &tables {
        let points: u64 = small
            .iter()
            .map(|x| points_per_value(x.len(), y.values.len()))
            .sum();
        for z in &tables {
            for w in &tables {
                check_kleisli_assoc(monad, points, y, z, w, &mut report);
            }
        }
    }
    report
}

fn check_structure_laws(monad: &MonadSpec, carrier: &FinSet, max_len: usize, report: &mut LawReport) {
    let atoms = carrier.values();
    let t1 = monad.lift(&atoms, max_len);
    for v in &t1 {
        let left = monad.bind(v, |x| Ok(monad.unit(x.clone())));
        report.record(Law::LeftUnit, left.as_ref() == Ok(v), carrier, || {
            format!("μ(T(η)({v})) = {}", show(&left))
        });
        let right = monad.join(&monad.unit(v.clone()));
        report.record(Law::RightUnit, right.as_ref() == Ok(v), carrier, || {
            format!("μ(η({v})) = {}", show(&right))
        });
    }
    let t2 = monad.lift(&t1, max_len);
    let t3 = monad.lift(&t2, max_len);
    for w in &t3 {
        let outer_first = monad.join(w).and_then(|v| monad.join(&v));
        let inner_first = monad.fmap(w, |v| monad.join(v)).and_then(|v| monad.join(&v));
        let ok = outer_first.is_ok() && outer_first == inner_first;
        report.record(Law::Associativity, ok, carrier, || {
            format!(
                "{w}: μ∘μ_T gives {}, μ∘T(μ) gives {}",
                show(&outer_first),
                show(&inner_first)
            )
        });
    }
}

fn show(v: &Result<Value, KleisliError>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

/// Every Kleisli arrow out of a domain is a choice of lifted value per atom;
/// values of `T(Y)` are enumerated once and arrows refer to them by index.
struct ArrowTable<'a> {
    target: &'a FinSet,
    values: Vec<Value>,
}

impl<'a> ArrowTable<'a> {
    fn new(monad: &MonadSpec, target: &'a FinSet, max_len: usize) -> Self {
        ArrowTable {
            target,
            values: monad.lift(&target.values(), max_len),
        }
    }

    /// All arrows from a domain of `n` atoms, as index vectors.
    fn arrows(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..self.values.len()).map(move |i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

fn apply_indexed(
    arrow: &[usize],
    domain: &FinSet,
    values: &[Value],
    v: &Value,
) -> Result<Value, KleisliError> {
    match v {
        Value::Atom(a) => domain
            .elements()
            .iter()
            .position(|x| x == a)
            .map(|i| values[arrow[i]].clone())
            .ok_or_else(|| KleisliError::NotInDomain(a.to_string())),
        other => Err(KleisliError::NotInDomain(other.to_string())),
    }
}

fn check_kleisli_units(monad: &MonadSpec, x: &FinSet, y: &ArrowTable, report: &mut LawReport) {
    let carrier = format!("{x} -> T{}", y.target);
    for f in y.arrows(x.len()) {
        for (i, a) in x.elements().iter().enumerate() {
            let fa = &y.values[f[i]];
            // f ∘ η at a: bind η(a) through f.
            let left = monad.bind(&monad.unit(Value::Atom(a.clone())), |v| {
                apply_indexed(&f, x, &y.values, v)
            });
            report.record(Law::KleisliLeftUnit, left.as_ref() == Ok(fa), &carrier, || {
                format!("at {a}: (f∘η)(a) = {}, f(a) = {fa}", show(&left))
            });
            let right = monad.bind(fa, |v| Ok(monad.unit(v.clone())));
            report.record(Law::KleisliRightUnit, right.as_ref() == Ok(fa), &carrier, || {
                format!("at {a}: (η∘f)(a) = {}, f(a) = {fa}", show(&right))
            });
        }
    }
}

/// Number of (arrow, point) pairs over an `n`-atom domain at which the arrow
/// takes one given value out of `values` possibilities.
fn points_per_value(n: usize, values: usize) -> u64 {
    if n == 0 {
        0
    } else {
        n as u64 * (values as u64).pow(n as u32 - 1)
    }
}

/// Pointwise, both sides of associativity at `a` depend only on f(a), g and
/// h, so each distinct (f(a), g, h) is evaluated once and counted for every
/// composable triple and point that reaches it.
fn check_kleisli_assoc(
    monad: &MonadSpec,
    points: u64,
    y: &ArrowTable,
    z: &ArrowTable,
    w: &ArrowTable,
    report: &mut LawReport,
) {
    let gs = z.arrows(y.target.len());
    let hs = w.arrows(z.target.len());
    let carrier = format!("X -> T{} -> T{} -> T{}", y.target, z.target, w.target);
    let apply = |arrow: &[usize], from: &ArrowTable, to: &ArrowTable, v: &Value| {
        apply_indexed(arrow, from.target, &to.values, v)
    };
    let atoms = y.target.values();
    // g ∘ f at the point, for every f(a) and g.
    let gf: Vec<Vec<Result<Value, KleisliError>>> = gs
        .iter()
        .map(|g| {
            y.values
                .iter()
                .map(|fav| monad.bind(fav, |v| apply(g, y, z, v)))
                .collect()
        })
        .collect();
    for (gi, g) in gs.iter().enumerate() {
        for h in &hs {
            // h ∘ g on each atom of Y, as a lookup table.
            let hg: Vec<Result<Value, KleisliError>> = atoms
                .iter()
                .map(|v| monad.bind(&apply(g, y, z, v)?, |u| apply(h, z, w, u)))
                .collect();
            let apply_hg = |v: &Value| match v {
                Value::Atom(a) => y
                    .target
                    .elements()
                    .iter()
                    .position(|x| x == a)
                    .map(|i| hg[i].clone())
                    .unwrap_or_else(|| Err(KleisliError::NotInDomain(a.to_string()))),
                other => Err(KleisliError::NotInDomain(other.to_string())),
            };
            for (fi, fav) in y.values.iter().enumerate() {
                // (h ∘ g) ∘ f
                let lhs = monad.bind(fav, apply_hg);
                // h ∘ (g ∘ f)
                let rhs = match &gf[gi][fi] {
                    Ok(v) => monad.bind(v, |u| apply(h, z, w, u)),
                    Err(e) => Err(e.clone()),
                };
                let ok = lhs.is_ok() && lhs == rhs;
                report.record_many(Law::KleisliAssociativity, ok, points, &carrier, || {
                    format!(
                        "f(a) = {fav}: (h∘g)∘f gives {}, h∘(g∘f) gives {}",
                        show(&lhs),
                        show(&rhs)
                    )
                });
            }
        }
    }
}
