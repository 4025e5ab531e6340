use serde::Serialize;

/// Error reported by the front end, printed as JSON on stderr.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    /// Time at which an integration stopped, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
            t: None,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::new("ConfigError", message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError::new("IoError", message)
    }

    pub fn schema(message: impl Into<String>) -> Self {
        CliError::new("SchemaMismatch", message)
    }

    /// `{"error": {...}}`.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<quadric_landau::Error> for CliError {
    fn from(e: quadric_landau::Error) -> Self {
        let t = match &e {
            quadric_landau::Error::SingularityReached { t, .. }
            | quadric_landau::Error::StepSizeUnderflow { t } => Some(*t),
            _ => None,
        };
        CliError {
            kind: e.kind().to_string(),
            message: e.to_string(),
            t,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
