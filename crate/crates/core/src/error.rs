use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("the tau = 0 case must use the monomial path")]
    TauZero,

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("rank-deficient least-squares design: {0}")]
    RankDeficient(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("conjugate pairing failed: {0}")]
    Pairing(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
