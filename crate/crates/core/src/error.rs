use thiserror::Error;

use crate::field::Level;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u64,
        budget: u64,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("element does not lie in {level}")]
    NotInSubfield { level: Level },

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("the zero function has no valuation")]
    ZeroFunction,

    #[error("series precision {precision} too small to resolve the valuation")]
    PrecisionExhausted { precision: usize },

    #[error("curve is not maximal: {count} points, maximal count is {expected}")]
    NotMaximal { count: u64, expected: u64 },

    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("no pair (s, t) with q+1 = s*q - t*m for m={m}, q={q}")]
    NoSelmerPair { m: u64, q: u64 },

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("image of f is not of the form xi^(im) F_q")]
    ImageNotSubspace,

    #[error("no epsilon solves the trace equation")]
    NoEpsilon,

    #[error("no integer t brackets 2g = {two_g}")]
    NoInterval { two_g: u64 },

    #[error("lambda = {lambda} must be smaller than the code length {length}")]
    LambdaTooLarge { lambda: u64, length: u64 },

    #[error("linear algebra failure: {0}")]
    Linear(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid user input, as opposed to failed
    /// identities or exhausted budgets.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::InvalidParameter(_)
                | Error::NotCoprime(..)
                | Error::LambdaTooLarge { .. }
                | Error::NotOnCurve
                | Error::Parse(_)
        )
    }
}
