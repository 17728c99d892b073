use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("evaluation error in `{subexpr}`: {reason}")]
    Eval { subexpr: String, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid integrand: {0}")]
    InvalidIntegrand(String),
    #[error("adaptive quadrature did not converge on [{lo}, {hi}] within the depth limit")]
    Quadrature { lo: f64, hi: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("trace has no steps with positive gamma")]
    InsufficientTrace,
}
