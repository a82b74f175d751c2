use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadrature did not reach tolerance {tol:e}: error estimate {achieved:e} after {evaluations} evaluations")]
    NonConvergence {
        tol: f64,
        achieved: f64,
        evaluations: usize,
    },
    #[error("interval ({lo}, {hi}) is outside the function domain")]
    DomainMismatch { lo: f64, hi: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("term increases after the declared monotone index: term({at}) < term({next})")]
    MonotonicityViolation { at: u64, next: u64 },
    #[error("need at least 3 points for a fit, got {0}")]
    TooFewPoints(usize),
    #[error("non-positive coordinate ({x}, {y}) in log-log fit")]
    NonPositiveCoordinate { x: f64, y: f64 },
    #[error("Young function vanishes at u = {0}")]
    DivisionByZero(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("closed form disagrees with quadrature: {0}")]
    ClosedFormMismatch(String),
    #[error("empty sample batch")]
    EmptyBatch,
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
