use thiserror::Error;

/// Errors surfaced by the solvers, the oracle and the scenario layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain on which the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A distribution failed validation (mass, ordering, monotonicity).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    /// A parameter combination is not admissible for the requested construction.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A search terminated without finding an admissible solution.
    #[error("no solution: {0}")]
    NoSolution(String),
    /// The linear program behind the game oracle failed.
    #[error("oracle failure: {0}")]
    Oracle(String),
    /// A scenario document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
