//! Column-wise comparison of two outputs with the same schema.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// A parsed CSV output: metadata, header and raw fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTable {
    /// `#` lines without the marker.
    pub meta: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnDeviation {
    pub column: String,
    /// Largest absolute difference over numeric cells; infinite when a text
    /// cell or the NaN pattern differs.
    pub max_abs: f64,
    pub max_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub file_a: String,
    pub file_b: String,
    pub tolerance: f64,
    pub rows: usize,
    pub columns: Vec<ColumnDeviation>,
    pub max_deviation: f64,
    pub pass: bool,
}

impl CompareReport {
    pub(crate) fn assemble(
        file_a: String,
        file_b: String,
        tolerance: f64,
        rows: usize,
        columns: Vec<ColumnDeviation>,
    ) -> Self {
        let max_deviation = columns.iter().map(|c| c.max_abs).fold(0.0, f64::max);
        let pass = columns.iter().all(|c| c.pass);
        CompareReport {
            file_a,
            file_b,
            tolerance,
            rows,
            columns,
            max_deviation,
            pass,
        }
    }
}

pub fn parse_csv(text: &str) -> CliResult<ParsedTable> {
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let columns = rd
        .headers()
        .map_err(|e| CliError::schema(format!("unreadable csv header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| CliError::schema(format!("unreadable csv row: {e}")))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    let meta = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .map(|l| l.trim().to_string())
        .collect();
    Ok(ParsedTable {
        meta,
        columns,
        rows,
    })
}

impl ParsedTable {
    /// The `config_sha256` metadata entry.
    pub fn fingerprint(&self) -> Option<&str> {
        self.meta
            .iter()
            .find_map(|l| l.strip_prefix("config_sha256:"))
            .map(str::trim)
    }
}

fn number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok()
}

/// Accumulates deviations for one column.
#[derive(Default)]
struct Tracker {
    max_abs: f64,
    max_rel: f64,
}

impl Tracker {
    fn numbers(&mut self, a: f64, b: f64) {
        if a.is_nan() && b.is_nan() || a == b {
            return;
        }
        let d = (a - b).abs();
        let d = if d.is_nan() { f64::INFINITY } else { d };
        self.max_abs = self.max_abs.max(d);
        let scale = a.abs().max(b.abs());
        self.max_rel = self.max_rel.max(if scale > 0.0 { d / scale } else { 0.0 });
    }

    fn fields(&mut self, a: &str, b: &str) {
        match (number(a), number(b)) {
            (Some(x), Some(y)) => self.numbers(x, y),
            _ if a == b => {}
            _ => {
                self.max_abs = f64::INFINITY;
                self.max_rel = f64::INFINITY;
            }
        }
    }

    fn finish(self, column: String, tol: f64) -> ColumnDeviation {
        ColumnDeviation {
            column,
            pass: self.max_abs <= tol,
            max_abs: self.max_abs,
            max_rel: self.max_rel,
        }
    }
}

pub fn compare_tables(
    a: &ParsedTable,
    b: &ParsedTable,
    tol: f64,
) -> CliResult<Vec<ColumnDeviation>> {
    if a.columns != b.columns {
        return Err(CliError::schema(format!(
            "columns differ: {:?} vs {:?}",
            a.columns, b.columns
        )));
    }
    if a.rows.len() != b.rows.len() {
        return Err(CliError::schema(format!(
            "row counts differ: {} vs {}",
            a.rows.len(),
            b.rows.len()
        )));
    }
    let mut trackers: Vec<Tracker> = a.columns.iter().map(|_| Tracker::default()).collect();
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        if ra.len() != a.columns.len() || rb.len() != a.columns.len() {
            return Err(CliError::schema("ragged csv row".to_string()));
        }
        for ((tr, fa), fb) in trackers.iter_mut().zip(ra).zip(rb) {
            tr.fields(fa, fb);
        }
    }
    Ok(trackers
        .into_iter()
        .zip(&a.columns)
        .map(|(tr, c)| tr.finish(c.clone(), tol))
        .collect())
}

/// Leaves of a JSON value keyed by their path.
fn flatten(v: &Value, path: String, out: &mut BTreeMap<String, Value>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(
                    x,
                    if path.is_empty() {
                        k.clone()
                    } else {
                        format!("{path}.{k}")
                    },
                    out,
                );
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(x, format!("{path}[{i}]"), out);
            }
        }
        leaf => {
            out.insert(path, leaf.clone());
        }
    }
}

/// The `result` of a command document, or the whole document.
fn payload(v: &Value) -> &Value {
    match v.get("result") {
        Some(r) if v.get("config_sha256").is_some() => r,
        _ => v,
    }
}

pub fn compare_json(a: &Value, b: &Value, tol: f64) -> CliResult<(usize, Vec<ColumnDeviation>)> {
    let (mut fa, mut fb) = (BTreeMap::new(), BTreeMap::new());
    flatten(payload(a), String::new(), &mut fa);
    flatten(payload(b), String::new(), &mut fb);
    if !fa.keys().eq(fb.keys()) {
        let only_a: Vec<_> = fa.keys().filter(|k| !fb.contains_key(*k)).take(5).collect();
        let only_b: Vec<_> = fb.keys().filter(|k| !fa.contains_key(*k)).take(5).collect();
        return Err(CliError::schema(format!(
            "json structures differ: only in first {only_a:?}, only in second {only_b:?}"
        )));
    }
    let mut out = Vec::with_capacity(fa.len());
    for (k, va) in &fa {
        let vb = &fb[k];
        let mut tr = Tracker::default();
        match (va, vb) {
            (Value::Number(x), Value::Number(y)) => tr.numbers(
                x.as_f64().unwrap_or(f64::NAN),
                y.as_f64().unwrap_or(f64::NAN),
            ),
            (x, y) if x == y => {}
            _ => {
                tr.max_abs = f64::INFINITY;
                tr.max_rel = f64::INFINITY;
            }
        }
        out.push(tr.finish(k.clone(), tol));
    }
    Ok((1, out))
}

/// Parsed output file.
pub enum Document {
    Csv(ParsedTable),
    Json(Value),
}

pub fn parse_document(text: &str) -> CliResult<Document> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text)
            .map(Document::Json)
            .map_err(|e| CliError::schema(format!("unreadable json: {e}")))
    } else {
        parse_csv(text).map(Document::Csv)
    }
}

pub fn read_document(path: &Path) -> CliResult<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text)
}

/// Compares two rendered outputs.
pub fn compare_texts(a: &str, b: &str, tol: f64, names: (&str, &str)) -> CliResult<CompareReport> {
    let (rows, columns) = match (parse_document(a)?, parse_document(b)?) {
        (Document::Csv(x), Document::Csv(y)) => (x.rows.len(), compare_tables(&x, &y, tol)?),
        (Document::Json(x), Document::Json(y)) => compare_json(&x, &y, tol)?,
        _ => return Err(CliError::schema("cannot compare csv with json".to_string())),
    };
    Ok(CompareReport::assemble(
        names.0.to_string(),
        names.1.to_string(),
        tol,
        rows,
        columns,
    ))
}

/// Per-column maximum deviation between two output files.
pub fn compare_outputs(file_a: &Path, file_b: &Path, tol: f64) -> CliResult<CompareReport> {
    let read = |p: &Path| {
        std::fs::read_to_string(p)
            .map_err(|e| CliError::io(format!("cannot read {}: {e}", p.display())))
    };
    compare_texts(
        &read(file_a)?,
        &read(file_b)?,
        tol,
        (&file_a.display().to_string(), &file_b.display().to_string()),
    )
}
