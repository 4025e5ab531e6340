//! Front end of `quadric-landau`: configuration, command execution and
//! CSV/JSON output.

pub mod commands;
pub mod compare;
pub mod config;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};

pub use commands::{orbit_against_trajectory, run, Command};
pub use compare::{compare_outputs, compare_texts, CompareReport};
pub use config::{Format, ScenarioConfig};
pub use error::{CliError, CliResult};

use compare::{read_document, Document};

/// Parsed command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub command: Command,
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub compare: Option<(PathBuf, f64)>,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub rendered: String,
    pub out: Option<PathBuf>,
    pub comparison: Option<CompareReport>,
}

/// Runs one command and renders its output. Command-line flags take
/// precedence over the `output` section of the configuration.
pub fn execute(inv: &Invocation) -> CliResult<Outcome> {
    let cfg = ScenarioConfig::load(&inv.config)?;
    let report = run(inv.command, &cfg)?;
    let output = cfg.output.clone().unwrap_or_default();
    let format = inv
        .format
        .or(output.format)
        .unwrap_or_else(|| report.default_format());
    let rendered = output::render(inv.command.name(), &cfg, &report, format)?;
    let out = inv.out.clone().or_else(|| output.path.map(PathBuf::from));
    if let Some(path) = &out {
        std::fs::write(path, &rendered)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    }
    let comparison = match &inv.compare {
        None => None,
        Some((other, tol)) => Some(compare_with(
            inv.command,
            &cfg,
            &rendered,
            out.as_deref(),
            other,
            *tol,
        )?),
    };
    Ok(Outcome {
        rendered,
        out,
        comparison,
    })
}

/// Compares this run's output with `other`. An `hj-orbit` run compared
/// with a trajectory output checks the two methods against each other.
fn compare_with(
    command: Command,
    cfg: &ScenarioConfig,
    rendered: &str,
    out: Option<&Path>,
    other: &Path,
    tol: f64,
) -> CliResult<CompareReport> {
    if !(tol >= 0.0) {
        return Err(CliError::config(format!(
            "comparison tolerance must be >= 0, got {tol}"
        )));
    }
    let this = out
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "<stdout>".to_string());
    let that = other.display().to_string();
    if command == Command::HjOrbit {
        if let Document::Csv(t) = read_document(other)? {
            if t.columns.iter().any(|c| c == "p_u") {
                return orbit_against_trajectory(cfg, &t, tol, (&this, &that));
            }
        }
    }
    let other_text = std::fs::read_to_string(other)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", other.display())))?;
    compare_texts(rendered, &other_text, tol, (&this, &that))
}
