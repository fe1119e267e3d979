use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid CSR structure: {0}")]
    InvalidCsr(String),

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("rank zero: matrix has no nonzero singular values")]
    RankZero,

    #[error("power iteration did not converge after {iterations} iterations (last estimate {last_estimate})")]
    PowerIteration {
        iterations: usize,
        last_estimate: f64,
    },

    #[error("ridge solve did not converge after {iterations} iterations (residual {residual:e}, threshold {threshold:e})")]
    RidgeNotConverged {
        iterations: usize,
        residual: f64,
        threshold: f64,
    },

    #[error("error budget exhausted: {requested} iterations requested, operator error {err_bound:e} allows at most {allowed}")]
    BudgetExhausted {
        requested: usize,
        allowed: usize,
        err_bound: f64,
    },

    #[error("quadrature did not converge on [{lo}, {hi}] (tolerance {tol:e})")]
    Quadrature { lo: f64, hi: f64, tol: f64 },

    #[error("grid check failed: max error {max_error:e} exceeds {tolerance:e}")]
    GridCheck { max_error: f64, tolerance: f64 },

    #[error("iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration {
            iteration,
            source: Box::new(self),
        }
    }

    pub(crate) fn in_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }

    /// True for failures of the numerical machinery (non-convergence, exhausted
    /// budgets) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::RankZero
            | Error::PowerIteration { .. }
            | Error::RidgeNotConverged { .. }
            | Error::BudgetExhausted { .. }
            | Error::Quadrature { .. }
            | Error::GridCheck { .. } => true,
            Error::AtIteration { source, .. } | Error::Stage { source, .. } => {
                source.is_numerical()
            }
            _ => false,
        }
    }

    /// The innermost error after peeling iteration and stage labels.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIteration { source, .. } | Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub(crate) fn check_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            got,
        });
    }
    Ok(())
}

pub(crate) fn check_finite(context: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context))
    }
}
