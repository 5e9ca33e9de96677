use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "step size fell below {min_step:e} at t = {t} before meeting tolerance \
         {tol:e} (achieved error estimate {achieved:e})"
    )]
    Convergence {
        t: f64,
        min_step: f64,
        tol: f64,
        achieved: f64,
    },

    #[error(
        "integration window T = {given} is too small for the asymptotic condition; \
         T >= {required} is required"
    )]
    WindowTooSmall { given: f64, required: f64 },

    #[error("degenerate field (alpha = V = 0) at t = {t}")]
    DegenerateField { t: f64 },

    #[error("t = {t} is a discontinuity of the drive model")]
    AtDiscontinuity { t: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no level crossing for c = {c} (closed-form crossing formulas need c > 0)")]
    NoCrossing { c: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Quadrature { .. }
                | Error::Consistency(_)
                | Error::Domain(_)
        )
    }
}
