use thiserror::Error;

/// Errors raised by the pricing library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Evaluation point outside the analytic domain of a function, or an
    /// argument violating an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma function evaluated at a nonpositive integer.
    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    /// A quadrature or series did not reach its tolerance within the budget.
    #[error("no convergence in {routine}: {detail}")]
    Convergence { routine: &'static str, detail: String },

    /// Model parameters outside their admissible set.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The simulation scheme does not support the model.
    #[error("unsupported scheme: {0}")]
    UnsupportedScheme(String),

    /// The Levy exponent fails the analyticity/growth condition required by
    /// the randomized Laplace identity off the real axis.
    #[error("growth condition violated: {0}")]
    ConditionViolated(String),
}

impl Error {
    pub(crate) fn convergence(routine: &'static str, detail: impl Into<String>) -> Self {
        Error::Convergence { routine, detail: detail.into() }
    }

    /// True for failures of numerical convergence (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
