use thiserror::Error;

/// Errors raised by kernel evaluation, truncation planning and the
/// verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain (a puncture, outside an annulus,
    /// or a non-finite coordinate).
    #[error("domain: {0}")]
    Domain(String),
    /// The evaluation point coincides with the pole.
    #[error("pole: p equals q")]
    Pole,
    /// An exponent or configuration value violates its admissible range.
    #[error("parameter: {0}")]
    Parameter(String),
    #[error("truncation: no J <= {j_max} certifies tolerance {tol:e}")]
    Truncation { j_max: usize, tol: f64 },
    #[error("convergence: successive extrapolants differ by {difference:e} (tolerance {tol:e})")]
    Convergence { difference: f64, tol: f64 },
    #[error("fit: residual {residual:e} exceeds cap {cap:e}")]
    Fit { residual: f64, cap: f64 },
    #[error("solve: {0}")]
    Solve(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
