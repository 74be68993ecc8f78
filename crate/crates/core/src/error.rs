use thiserror::Error;

/// Errors produced by the solvers and checks in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument t = {t} outside [0, pi/sqrt(c)] for curvature c = {c}")]
    Domain { c: f64, t: f64 },

    #[error("invalid ball: {0}")]
    InvalidBall(String),

    #[error("invalid warp profile: {0}")]
    InvalidWarp(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("bisection did not converge after {iterations} steps, last bracket [{lo}, {hi}]")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("solution overflow at t = {t} (|v| = {value:e})")]
    Overflow { t: f64, value: f64 },

    #[error("inverse iteration did not reach residual {tol:e} in {iterations} steps (last {residual:e})")]
    IterationCap { iterations: usize, residual: f64, tol: f64 },

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

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
