use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("cannot invert non-monomial expression: {0}")]
    NonInvertible(String),

    #[error("non-polynomial dependence: {0}")]
    NonPolynomial(String),

    #[error("ill-formed reduction rule: {0}")]
    BadRule(String),

    #[error("operator is not formally self-adjoint: {0}")]
    NotHermitian(String),

    #[error("residual imaginary part after normalization: {0}")]
    ResidualImaginary(String),

    #[error("incomplete rule set: unreduced {0}")]
    MissingRule(String),

    #[error("unknown system: {0}")]
    UnknownSystem(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Other(String),
}
