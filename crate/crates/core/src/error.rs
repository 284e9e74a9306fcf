use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inadmissible constants; the message names the violated constraint.
    #[error("parameter rejected: {0}")]
    Parameter(String),
    /// A precondition on an input object failed.
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("no convergence: {msg} (best residual {best_residual:.3e})")]
    NoConvergence { msg: String, best_residual: f64 },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
