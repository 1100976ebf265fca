use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },
    #[error("strip does not meet the body interior")]
    EmptyIntersection,
    #[error("invalid Reuleaux order {0}: must be odd and at least 3")]
    InvalidOrder(usize),
    #[error("projection onto the unit-width class failed: {0}")]
    ProjectionFailed(String),
    #[error("boundary does not close: defect {defect:e} exceeds {tol:e}")]
    ClosureViolation { defect: f64, tol: f64 },
    #[error("perturbation circle does not meet the boundary: {0}")]
    NoIntersection(String),
    #[error("curvature near the chosen direction is not zero: {0}")]
    NotAZeroPoint(String),
    #[error("invalid fence: {0}")]
    InvalidFence(String),
    #[error("solver failed: {0}")]
    SolverFailed(String),
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("two-cut oracle beats single cut: single {single}, two-cut {two_cut}")]
    OracleViolation { single: f64, two_cut: f64 },
    #[error("weight is not log-concave (max second difference of log {0:e})")]
    NotLogConcave(f64),
    #[error("nonpositive refined margin {value:e} at x = {x}")]
    NonpositiveMargin { value: f64, x: f64 },
    #[error("no balanced cut found: {0}")]
    NoBalancedCut(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DegenerateInput(_)
                | Error::InvalidOrder(_)
                | Error::DomainError(_)
                | Error::Precondition(_)
                | Error::Parse(_)
                | Error::EmptyIntersection
                | Error::InvalidFence(_)
                | Error::NotLogConcave(_)
                | Error::NotAZeroPoint(_)
                | Error::IllConditioned(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
