use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("exponent of {0} is not integral")]
    NonIntegralExponent(String),

    #[error("exponent {0} is not a half-integer")]
    NotHalfInteger(String),

    #[error("limit undefined: {0}")]
    LimitUndefined(String),

    #[error("divergent limit: {0}")]
    DivergentLimit(String),

    #[error("normalization mismatch between terms: {0}")]
    NormalizationMismatch(String),

    #[error("terms are not sections of one line bundle: {0}")]
    InconsistentBundle(String),

    #[error("diagrams lie in different fixed components: {0}")]
    ComponentMismatch(String),

    #[error("numeric evaluation did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
