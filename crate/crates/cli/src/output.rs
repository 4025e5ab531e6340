//! CSV and JSON rendering with the configuration fingerprint.

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, ScenarioConfig};
use crate::error::{CliError, CliResult};

/// A table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    /// Floats with 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => "NaN".to_string(),
            Cell::Num(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.to_string(),
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

/// Result of a command before rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Table(Table),
    Json(Value),
}

impl Report {
    pub fn default_format(&self) -> Format {
        match self {
            Report::Table(_) => Format::Csv,
            Report::Json(_) => Format::Json,
        }
    }
}

fn envelope(command: &str, cfg: &ScenarioConfig, result: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config_sha256": cfg.fingerprint(),
        "config": serde_json::to_value(cfg).expect("configuration serializes"),
        "result": result,
    })
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::io(e.to_string())
}

/// Renders a report. Tables may be written as CSV or JSON; structured
/// reports only as JSON.
pub fn render(
    command: &str,
    cfg: &ScenarioConfig,
    report: &Report,
    format: Format,
) -> CliResult<String> {
    match (report, format) {
        (Report::Table(t), Format::Csv) => {
            let mut out = String::new();
            out.push_str(&format!(
                "# quadric-landau {} {command}\n",
                env!("CARGO_PKG_VERSION")
            ));
            out.push_str(&format!("# config_sha256: {}\n", cfg.fingerprint()));
            out.push_str(&format!("# config: {}\n", cfg.canonical()));
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&t.columns).map_err(csv_error)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::render))
                    .map_err(csv_error)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::io(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
            Ok(out)
        }
        (Report::Table(t), Format::Json) => {
            let doc = envelope(
                command,
                cfg,
                serde_json::to_value(t).expect("table serializes"),
            );
            Ok(format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("json renders")
            ))
        }
        (Report::Json(v), Format::Json) => {
            let doc = envelope(command, cfg, v.clone());
            Ok(format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("json renders")
            ))
        }
        (Report::Json(_), Format::Csv) => Err(CliError::new(
            "UnsupportedFormat",
            format!("`{command}` produces a structured report and is only available as json"),
        )),
    }
}
