use thiserror::Error;

/// Errors shared by all rotovort modules.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("solver failed: {0}")]
    Solver(String),

    #[error("unsupported geometry: {0}")]
    Geometry(String),

    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn argument(msg: impl Into<String>) -> CoreError {
    CoreError::Argument(msg.into())
}

pub(crate) fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(argument(msg.to_string()))
    }
}
