//! Library half of the rotovort CLI: configuration parsing with full error
//! lists, the per-command runners, bit-stable output emission, and the sweep
//! orchestrator. The binary in `main.rs` is a thin clap wrapper over this.

pub mod commands;
pub mod config;
pub mod log;
pub mod output;
pub mod sweep;

/// Process-level failure classes, mapped to exit codes by the binary:
/// 0 success, 2 configuration, 3 solver non-convergence, 4 I/O.
#[derive(Debug)]
pub enum CliError {
    /// All configuration problems found, not just the first.
    Config(Vec<String>),
    Solver(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(errors) => {
                writeln!(f, "configuration invalid ({} problem(s)):", errors.len())?;
                for e in errors {
                    writeln!(f, "  - {e}")?;
                }
                Ok(())
            }
            CliError::Solver(msg) => write!(f, "solver failure: {msg}"),
            CliError::Io(msg) => write!(f, "I/O failure: {msg}"),
        }
    }
}

impl From<rotovort_core::CoreError> for CliError {
    fn from(e: rotovort_core::CoreError) -> Self {
        use rotovort_core::CoreError::*;
        match e {
            Solver(m) => CliError::Solver(m),
            other => CliError::Config(vec![other.to_string()]),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
