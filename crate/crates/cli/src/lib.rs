//! Library side of the `ftql` command-line tool: config loading, batch runs,
//! artifact writing, example replays and the figure reproduction.

use std::fmt;
use std::path::{Path, PathBuf};

use ftql::config::{ConfigFormat, Experiment, ExperimentConfig};

pub mod artifacts;
pub mod canned;
pub mod figure;
pub mod replay;
pub mod run;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent configuration (exit 2).
    Config(String),
    /// Failure writing artifacts (exit 3).
    Io(String),
    /// Anything that goes wrong while running (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Runtime(_) => "runtime",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Runtime(m) => m,
        }
    }

    /// Machine-readable form printed on stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.message(), "exit_code": self.exit_code() })
            .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

pub(crate) fn runtime(e: ftql::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Parses config text with overrides and resolves it; game paths are taken
/// relative to `base_dir`.
pub fn experiment_from_text(
    text: &str,
    format: ConfigFormat,
    overrides: &[String],
    base_dir: Option<&Path>,
) -> Result<Experiment, CliError> {
    let config = ExperimentConfig::parse(text, format, overrides).map_err(|e| CliError::Config(e.to_string()))?;
    config.resolve(base_dir).map_err(|e| CliError::Config(e.to_string()))
}

/// Reads, parses and resolves a config file.
pub fn load_experiment(path: &Path, overrides: &[String]) -> Result<Experiment, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    experiment_from_text(&text, ConfigFormat::from_path(path), overrides, Some(&base))
}
