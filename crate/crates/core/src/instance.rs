//! Instances of a schema as linked CSV tables: one table per vertex, an `ID`
//! column plus one foreign-key column per outgoing arrow.
//!
//! Cell syntax: plain columns hold a single row id, `list` columns hold a
//! `;`-separated (possibly empty) sequence of row ids, and `maybe` columns
//! hold a row id or the absence marker `*`. Cells are trimmed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::kleisli::MonadKind;
use crate::report::ValidationReport;
use crate::schema::Schema;

pub const LIST_SEPARATOR: char = ';';
pub const ABSENT: &str = "*";

/// Known misspellings rewritten on load, so that fixtures copied verbatim from
/// the fable's tables agree with its prose.
pub const SPELLING_ALIASES: &[(&str, &str)] = &[("perserverence", "perseverance")];

/// Apply [`SPELLING_ALIASES`] to a token.
pub fn normalize_token(token: &str) -> String {
    let mut out = token.trim().to_string();
    for (from, to) in SPELLING_ALIASES {
        if out.contains(from) {
            out = out.replace(from, to);
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: u64,
        message: String,
    },
    #[error("{origin}: {message}")]
    Io { origin: String, message: String },
    #[error("{origin}: no table for vertex `{vertex}`")]
    MissingTable { origin: String, vertex: String },
    #[error("table given for unknown vertex `{0}`")]
    UnknownTable(String),
    #[error("{origin}:{line}: dangling key `{key}` in column `{arrow}`: no such row in `{target}`")]
    DanglingKey {
        origin: String,
        line: u64,
        arrow: String,
        key: String,
        target: String,
    },
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("monadic arrow `{0}` on path")]
    MonadicArrow(String),
    #[error("path is not composable at step {0}")]
    NotComposable(usize),
    #[error("no row `{row}` in table `{vertex}`")]
    UnknownRow { vertex: String, row: String },
}

/// One cell of a foreign-key column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Key(String),
    List(Vec<String>),
    Maybe(Option<String>),
}

impl Cell {
    /// Every row id the cell refers to.
    pub fn keys(&self) -> Vec<&str> {
        match self {
            Cell::Key(k) => vec![k.as_str()],
            Cell::List(ks) => ks.iter().map(String::as_str).collect(),
            Cell::Maybe(k) => k.iter().map(String::as_str).collect(),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Key(k) => f.write_str(k),
            Cell::List(ks) => f.write_str(&ks.join(";")),
            Cell::Maybe(None) => f.write_str(ABSENT),
            Cell::Maybe(Some(k)) => f.write_str(k),
        }
    }
}

/// Where a table came from, for error messages, and its text.
#[derive(Debug, Clone)]
pub struct CsvSource {
    pub origin: String,
    pub text: String,
}

impl CsvSource {
    pub fn new(origin: impl Into<String>, text: impl Into<String>) -> Self {
        CsvSource {
            origin: origin.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub vertex: String,
    ids: Vec<String>,
    /// Column cells aligned with `ids`, keyed by arrow id.
    columns: BTreeMap<String, Vec<Cell>>,
    index: HashMap<String, usize>,
    origin: String,
    /// Source line of each row, for messages.
    lines: Vec<u64>,
}

impl Table {
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, row: &str) -> bool {
        self.index.contains_key(row)
    }

    pub fn cell(&self, arrow: &str, row: &str) -> Option<&Cell> {
        let i = *self.index.get(row)?;
        self.columns.get(arrow).map(|c| &c[i])
    }

    pub fn column(&self, arrow: &str) -> Option<&[Cell]> {
        self.columns.get(arrow).map(Vec::as_slice)
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }
}

/// A schema together with one loaded table per vertex.
#[derive(Debug, Clone)]
pub struct Instance {
    pub schema: Schema,
    tables: BTreeMap<String, Table>,
}

impl Instance {
    pub fn table(&self, vertex: &str) -> Option<&Table> {
        self.tables.get(vertex)
    }

    pub fn tables(&self) -> impl Iterator<Item = &Table> {
        self.tables.values()
    }

    /// Canonical CSV text of one table: schema column order, rows in load order.
    pub fn table_csv(&self, vertex: &str) -> Option<String> {
        let table = self.tables.get(vertex)?;
        let arrows: Vec<&str> = self.schema.out_arrows(vertex).map(|a| a.id.as_str()).collect();
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header = vec!["ID"];
        header.extend(&arrows);
        w.write_record(&header).expect("write to memory");
        for (i, id) in table.ids.iter().enumerate() {
            let mut record = vec![id.clone()];
            for a in &arrows {
                record.push(table.columns[*a][i].to_string());
            }
            w.write_record(&record).expect("write to memory");
        }
        Some(String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 in, utf-8 out"))
    }
}

/// Parse one CSV per schema vertex and check referential integrity.
pub fn load_instance(
    schema: &Schema,
    files: &BTreeMap<String, CsvSource>,
) -> Result<Instance, InstanceError> {
    if let Some(extra) = files.keys().find(|v| schema.vertex(v).is_none()) {
        return Err(InstanceError::UnknownTable(extra.clone()));
    }
    let mut tables = BTreeMap::new();
    for v in &schema.vertices {
        let source = files.get(&v.id).ok_or_else(|| InstanceError::MissingTable {
            origin: schema.name.clone(),
            vertex: v.id.clone(),
        })?;
        tables.insert(v.id.clone(), parse_table(schema, &v.id, source)?);
    }
    check_references(schema, &tables)?;
    Ok(Instance {
        schema: schema.clone(),
        tables,
    })
}

/// Load `<dir>/<vertex>.csv` for every vertex of `schema`.
pub fn load_instance_dir(schema: &Schema, dir: &Path) -> Result<Instance, InstanceError> {
    let mut files = BTreeMap::new();
    for v in &schema.vertices {
        let path = dir.join(format!("{}.csv", v.id));
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => InstanceError::MissingTable {
                origin: origin.clone(),
                vertex: v.id.clone(),
            },
            _ => InstanceError::Io {
                origin: origin.clone(),
                message: e.to_string(),
            },
        })?;
        files.insert(v.id.clone(), CsvSource { origin, text });
    }
    load_instance(schema, &files)
}

fn parse_table(schema: &Schema, vertex: &str, source: &CsvSource) -> Result<Table, InstanceError> {
    let err = |line: u64, message: String| InstanceError::Parse {
        origin: source.origin.clone(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source.text.as_bytes());

    let arrows: Vec<_> = schema.out_arrows(vertex).collect();
    let mut order: Vec<Option<usize>> = Vec::new();
    {
        let header = reader
            .headers()
            .map_err(|e| err(csv_line(&e), e.to_string()))?;
        if header.is_empty() && arrows.is_empty() && source.text.trim().is_empty() {
            return Ok(empty_table(vertex, source));
        }
        if header.get(0) != Some("ID") {
            return Err(err(1, "first column must be `ID`".into()));
        }
        let mut seen = vec![false; arrows.len()];
        for name in header.iter().skip(1) {
            match arrows.iter().position(|a| a.id == name) {
                Some(i) if seen[i] => return Err(err(1, format!("duplicate column `{name}`"))),
                Some(i) => {
                    seen[i] = true;
                    order.push(Some(i));
                }
                None => {
                    return Err(err(
                        1,
                        format!("extra column `{name}`: `{vertex}` has no such outgoing arrow"),
                    ))
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(err(1, format!("missing column `{}`", arrows[i].id)));
        }
    }

    let mut table = empty_table(vertex, source);
    let mut columns: Vec<Vec<Cell>> = vec![Vec::new(); arrows.len()];
    for record in reader.records() {
        let record = record.map_err(|e| err(csv_line(&e), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let id = normalize_token(&record[0]);
        if id.is_empty() {
            return Err(err(line, "empty row id".into()));
        }
        if table.index.contains_key(&id) {
            return Err(err(line, format!("duplicate row id `{id}`")));
        }
        for (k, slot) in order.iter().enumerate() {
            let arrow = arrows[slot.expect("header resolved")];
            let cell = parse_cell(&record[k + 1], arrow.monad)
                .map_err(|m| err(line, format!("column `{}`: {m}", arrow.id)))?;
            columns[slot.expect("header resolved")].push(cell);
        }
        table.index.insert(id.clone(), table.ids.len());
        table.ids.push(id);
        table.lines.push(line);
    }
    table.columns = arrows
        .iter()
        .zip(columns)
        .map(|(a, c)| (a.id.clone(), c))
        .collect();
    Ok(table)
}

fn empty_table(vertex: &str, source: &CsvSource) -> Table {
    Table {
        vertex: vertex.to_string(),
        ids: Vec::new(),
        columns: BTreeMap::new(),
        index: HashMap::new(),
        origin: source.origin.clone(),
        lines: Vec::new(),
    }
}

fn csv_line(e: &csv::Error) -> u64 {
    e.position().map_or(0, |p| p.line())
}

fn parse_cell(raw: &str, monad: Option<MonadKind>) -> Result<Cell, String> {
    let raw = raw.trim();
    match monad {
        None => {
            if raw.is_empty() {
                Err("empty cell".into())
            } else if raw.contains(LIST_SEPARATOR) {
                Err(format!("multi-valued cell `{raw}` in a single-valued column"))
            } else if raw == ABSENT {
                Err("absence marker `*` in a single-valued column".into())
            } else {
                Ok(Cell::Key(normalize_token(raw)))
            }
        }
        Some(MonadKind::Maybe) => {
            if raw == ABSENT {
                Ok(Cell::Maybe(None))
            } else if raw.is_empty() {
                Err("empty cell (write `*` for absence)".into())
            } else if raw.contains(LIST_SEPARATOR) {
                Err(format!("multi-valued cell `{raw}` in an optional column"))
            } else {
                Ok(Cell::Maybe(Some(normalize_token(raw))))
            }
        }
        Some(MonadKind::List) => {
            if raw.is_empty() {
                return Ok(Cell::List(Vec::new()));
            }
            let items: Vec<String> = raw.split(LIST_SEPARATOR).map(normalize_token).collect();
            if items.iter().any(String::is_empty) {
                return Err(format!("empty element in list cell `{raw}`"));
            }
            Ok(Cell::List(items))
        }
    }
}

fn check_references(schema: &Schema, tables: &BTreeMap<String, Table>) -> Result<(), InstanceError> {
    for table in tables.values() {
        for arrow in schema.out_arrows(&table.vertex) {
            let target = &tables[&arrow.target];
            for (i, cell) in table.columns[&arrow.id].iter().enumerate() {
                if let Some(key) = cell.keys().into_iter().find(|k| !target.contains(k)) {
                    return Err(InstanceError::DanglingKey {
                        origin: table.origin.clone(),
                        line: table.lines[i],
                        arrow: arrow.id.clone(),
                        key: key.to_string(),
                        target: arrow.target.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Follow each foreign key of `path` (traversal order) starting at `row`.
pub fn eval_path(inst: &Instance, path: &[String], row: &str) -> Result<String, InstanceError> {
    let mut current = row.to_string();
    let mut vertex: Option<&str> = None;
    for (step, id) in path.iter().enumerate() {
        let arrow = inst
            .schema
            .arrow(id)
            .ok_or_else(|| InstanceError::UnknownArrow(id.clone()))?;
        if arrow.is_monadic() {
            return Err(InstanceError::MonadicArrow(id.clone()));
        }
        if vertex.is_some_and(|v| v != arrow.source) {
            return Err(InstanceError::NotComposable(step));
        }
        let table = inst
            .table(&arrow.source)
            .expect("every vertex has a table after load");
        let cell = table.cell(id, &current).ok_or_else(|| InstanceError::UnknownRow {
            vertex: arrow.source.clone(),
            row: current.clone(),
        })?;
        let Cell::Key(next) = cell else {
            return Err(InstanceError::MonadicArrow(id.clone()));
        };
        current = next.clone();
        vertex = Some(&arrow.target);
    }
    if vertex.is_none() {
        // Identity path: the row must still exist somewhere.
        if !inst.tables().any(|t| t.contains(row)) {
            return Err(InstanceError::UnknownRow {
                vertex: "?".into(),
                row: row.to_string(),
            });
        }
    }
    Ok(current)
}

/// Check every declared equivalence pointwise on every row of its source
/// table. Equivalences that pass through a list- or maybe-valued arrow are
/// not checked.
pub fn check_functoriality(inst: &Instance) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (k, eq) in inst.schema.equivalences.iter().enumerate() {
        let monadic = eq
            .lhs
            .iter()
            .chain(&eq.rhs)
            .any(|a| inst.schema.arrow(a).is_none_or(|a| a.is_monadic()));
        if monadic {
            continue;
        }
        let Some((source, _)) = inst.schema.path_endpoints(&eq.lhs) else {
            continue;
        };
        let table = inst.table(source).expect("every vertex has a table after load");
        for row in table.ids() {
            let lhs = eval_path(inst, &eq.lhs, row);
            let rhs = eval_path(inst, &eq.rhs, row);
            let location = format!("{source}/{row}");
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                (Ok(l), Ok(r)) => report.error(
                    location,
                    format!(
                        "equivalence {k}: {} reaches `{l}` but {} reaches `{r}`",
                        show_path(&eq.lhs),
                        show_path(&eq.rhs)
                    ),
                ),
                (Err(e), _) | (_, Err(e)) => {
                    report.error(location, format!("equivalence {k}: {e}"))
                }
            }
        }
    }
    report.sorted()
}

/// A traversal-order path in composite notation: `[a4, a3]` is `a3∘a4`.
pub fn show_path(path: &[String]) -> String {
    if path.is_empty() {
        return "id".into();
    }
    path.iter().rev().cloned().collect::<Vec<_>>().join("∘")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{builtin, ArrowDecl, VertexDecl};

    fn src(name: &str, text: &str) -> CsvSource {
        CsvSource::new(format!("{name}.csv"), text)
    }

    fn files(items: &[(&str, &str)]) -> BTreeMap<String, CsvSource> {
        items.iter().map(|(v, t)| (v.to_string(), src(v, t))).collect()
    }

    fn lawful_a() -> BTreeMap<String, CsvSource> {
        files(&[
            ("A", "ID,a1\nTortoise,challenge\n"),
            ("B", "ID\nrace win\nchallenge\n"),
            ("C", "ID,a2\nTortoise,race win\n"),
            ("D", "ID,a3\nTortoise,race win\nHare,challenge\n"),
            ("E", "ID,a4,a6\nFox,Tortoise,race win\n"),
            ("F", "ID,a5,a7\nnap,Hare,challenge\n"),
        ])
    }

    #[test]
    fn lawful_instance_has_no_findings() {
        let a = builtin("A").unwrap();
        let inst = load_instance(&a, &lawful_a()).unwrap();
        assert!(check_functoriality(&inst).is_empty());
        assert_eq!(inst.table("B").unwrap().len(), 2);
    }

    #[test]
    fn redirected_cell_is_one_finding() {
        let a = builtin("A").unwrap();
        let mut f = lawful_a();
        f.insert("E".into(), src("E", "ID,a4,a6\nFox,Tortoise,challenge\n"));
        let report = check_functoriality(&load_instance(&a, &f).unwrap());
        assert_eq!(report.len(), 1, "{report}");
        assert_eq!(report.findings[0].location, "E/Fox");
        assert!(report.findings[0].message.contains("a3∘a4"));
    }

    #[test]
    fn dangling_key_is_rejected() {
        let a = builtin("A").unwrap();
        let mut f = lawful_a();
        f.insert("B".into(), src("B", "ID\nrace win\n"));
        let e = load_instance(&a, &f).unwrap_err();
        assert_eq!(
            e,
            InstanceError::DanglingKey {
                origin: "A.csv".into(),
                line: 2,
                arrow: "a1".into(),
                key: "challenge".into(),
                target: "B".into()
            }
        );
    }

    #[test]
    fn empty_tables_are_valid() {
        let a = builtin("A").unwrap();
        let f = files(&[
            ("A", "ID,a1\n"),
            ("B", "ID\n"),
            ("C", "ID,a2\n"),
            ("D", "ID,a3\n"),
            ("E", "ID,a4,a6\n"),
            ("F", "ID,a5,a7\n"),
        ]);
        let inst = load_instance(&a, &f).unwrap();
        assert!(inst.tables().all(Table::is_empty));
        assert!(check_functoriality(&inst).is_empty());
    }

    #[test]
    fn header_and_row_errors() {
        let a = builtin("A").unwrap();
        let cases = [
            ("E", "ID,a4\nFox,Tortoise\n", "missing column `a6`"),
            ("E", "ID,a4,a6,a9\n", "extra column `a9`"),
            ("E", "Key,a4,a6\n", "first column must be `ID`"),
            ("D", "ID,a3\nHare,challenge\nHare,race win\n", "duplicate row id `Hare`"),
            ("D", "ID,a3\nHare,challenge;race win\n", "multi-valued cell"),
            ("D", "ID,a3\nHare,\n", "empty cell"),
        ];
        for (v, text, needle) in cases {
            let mut f = lawful_a();
            f.insert(v.into(), src(v, text));
            let e = load_instance(&a, &f).unwrap_err().to_string();
            assert!(e.contains(needle), "{e} lacks {needle}");
            assert!(e.starts_with(&format!("{v}.csv:")), "{e}");
        }
    }

    #[test]
    fn missing_table() {
        let a = builtin("A").unwrap();
        let mut f = lawful_a();
        f.remove("C");
        assert!(matches!(
            load_instance(&a, &f),
            Err(InstanceError::MissingTable { vertex, .. }) if vertex == "C"
        ));
    }

    #[test]
    fn eval_path_chases_keys() {
        let a = builtin("A").unwrap();
        let inst = load_instance(&a, &lawful_a()).unwrap();
        let p = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(eval_path(&inst, &p(&["a4", "a3"]), "Fox").unwrap(), "race win");
        assert_eq!(eval_path(&inst, &p(&[]), "Fox").unwrap(), "Fox");
        assert_eq!(
            eval_path(&inst, &p(&["a3"]), "Fox"),
            Err(InstanceError::UnknownRow {
                vertex: "D".into(),
                row: "Fox".into()
            })
        );
        assert_eq!(
            eval_path(&inst, &p(&["a4", "a4"]), "Fox"),
            Err(InstanceError::NotComposable(1))
        );
    }

    fn n_files() -> BTreeMap<String, CsvSource> {
        files(&[
            (
                "P",
                "ID,actorializes,hasJunctionType,isDiscoursivizationOf,dependsOn\n\
                 NP1,Tortoise_SubjectDoing;Tortoise_SubjectState,conjunction,Aesop226,*\n\
                 NP2,Hare_SubjectDoing;Hare_SubjectState,conjunction,Aesop226,NP1\n",
            ),
            ("a", "ID\nTortoise_SubjectDoing\nTortoise_SubjectState\nHare_SubjectDoing\nHare_SubjectState\n"),
            ("M", "ID\nconjunction\ndisjunction\n"),
            ("S", "ID\nAesop226\n"),
        ])
    }

    #[test]
    fn monadic_columns_load_and_are_not_chased() {
        let n = builtin("N").unwrap();
        let inst = load_instance(&n, &n_files()).unwrap();
        let p = inst.table("P").unwrap();
        assert_eq!(p.cell("dependsOn", "NP1"), Some(&Cell::Maybe(None)));
        assert_eq!(p.cell("dependsOn", "NP2"), Some(&Cell::Maybe(Some("NP1".into()))));
        assert_eq!(p.cell("actorializes", "NP1").unwrap().keys().len(), 2);
        assert_eq!(
            eval_path(&inst, &["actorializes".to_string()], "NP1"),
            Err(InstanceError::MonadicArrow("actorializes".into()))
        );
        assert!(check_functoriality(&inst).is_empty());
    }

    #[test]
    fn spelling_alias_is_applied() {
        assert_eq!(normalize_token(" perserverence_Helper "), "perseverance_Helper");
        let n = builtin("N").unwrap();
        let mut f = n_files();
        f.insert("a".into(), src("a", "ID\nTortoise_SubjectDoing\nTortoise_SubjectState\nHare_SubjectDoing\nHare_SubjectState\nperserverence_Helper\n"));
        let inst = load_instance(&n, &f).unwrap();
        assert!(inst.table("a").unwrap().contains("perseverance_Helper"));
    }

    #[test]
    fn canonical_csv_round_trips() {
        let n = builtin("N").unwrap();
        let inst = load_instance(&n, &n_files()).unwrap();
        let mut again = BTreeMap::new();
        for v in &n.vertices {
            again.insert(v.id.clone(), src(&v.id, &inst.table_csv(&v.id).unwrap()));
        }
        let inst2 = load_instance(&n, &again).unwrap();
        for v in &n.vertices {
            assert_eq!(inst.table_csv(&v.id), inst2.table_csv(&v.id));
        }
    }

    #[test]
    fn no_equivalences_means_no_findings() {
        let mut s = Schema::empty("loop");
        s.vertices.push(VertexDecl {
            id: "X".into(),
            label: "a thing".into(),
        });
        s.arrows.push(ArrowDecl {
            id: "next".into(),
            label: "precedes".into(),
            source: "X".into(),
            target: "X".into(),
            monad: None,
        });
        let inst = load_instance(&s, &files(&[("X", "ID,next\np,q\nq,p\n")])).unwrap();
        assert!(check_functoriality(&inst).is_empty());
    }
}
