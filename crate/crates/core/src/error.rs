use thiserror::Error;

use crate::linalg::ComplexMatrix;

pub type Result<T> = std::result::Result<T, WptError>;

#[derive(Debug, Error)]
pub enum WptError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// The receive combiner has gain above one, which a passive RF network
    /// cannot realize.
    #[error("passivity violation: combiner norm {norm} exceeds 1")]
    PassivityViolation { norm: f64 },

    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    /// An interior-point solve hit its iteration cap. `best` holds the last
    /// strictly feasible iterate.
    #[error("solver did not converge after {iterations} iterations (gap bound {gap})")]
    NonConvergence {
        iterations: usize,
        gap: f64,
        best: Option<Box<ComplexMatrix>>,
    },

    /// The successive-approximation loop lost its inner solver; objective
    /// values accepted so far are kept.
    #[error("dc-combining optimization failed at outer iteration {iteration}: {source}")]
    DcSubproblem {
        iteration: usize,
        trace: Vec<f64>,
        #[source]
        source: Box<WptError>,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl WptError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        WptError::InvalidInput(msg.into())
    }
}
