use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    Core(warpcone_core::Error),
    Config(String),
    Io(String),
    CheckFailed { failed: usize },
}

impl From<warpcone_core::Error> for CliError {
    fn from(e: warpcone_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::CheckFailed { failed } => write!(f, "{failed} invariant properties failed"),
        }
    }
}

impl std::error::Error for CliError {}

/// Machine-readable error record printed on stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub code: String,
    pub module: String,
    pub message: String,
    /// Offending values as debug text.
    pub detail: String,
}

impl CliError {
    pub fn record(&self) -> ErrorRecord {
        let (code, module, detail) = match self {
            CliError::Core(e) => (e.code(), e.module(), format!("{e:?}")),
            CliError::Config(m) => ("config", "cli", m.clone()),
            CliError::Io(m) => ("io", "cli", m.clone()),
            CliError::CheckFailed { failed } => ("check_failed", "check", failed.to_string()),
        };
        ErrorRecord {
            code: code.into(),
            module: module.into(),
            message: self.to_string(),
            detail,
        }
    }
}
