use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("argument {arg} is outside the domain of {function}")]
    Domain { function: &'static str, arg: f64 },

    #[error("moment of order {order} diverges (requires order > {bound})")]
    DivergentMoment { order: f64, bound: f64 },

    #[error("quadrature could not reach tolerance {tol:e}: {reason}")]
    Accuracy { tol: f64, reason: String },

    #[error("expected dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("dimension {n} exceeds the exact enumeration limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("hypothesis violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
