use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("function has a zero or pole at {0}")]
    PoleOrZero(String),
    #[error("point {0} is not in the support")]
    NotInSupport(String),
    #[error("divisors are not in normal crossing: {0}")]
    NotNormalCrossing(String),
    #[error("curve is not a component of the boundary")]
    CurveNotInDivisor,
    #[error("path is discontinuous at piece {0}")]
    Discontinuous(usize),
    #[error("pole too close to the path (distance {0:e})")]
    PoleTooClose(f64),
    #[error("path is not closed")]
    NotClosed,
    #[error("winding number is not an integer (residual {0:e})")]
    NonIntegerWinding(f64),
    #[error("step subdivision did not converge")]
    NoConvergence,
    #[error("epsilon {0:e} too large for the local separation {1:e}")]
    EpsilonTooLarge(f64, f64),
    #[error("word length exceeds the truncation depth")]
    TooDeep,
    #[error("alphabet mismatch: {0}")]
    Alphabet(String),
}

pub type Result<T> = std::result::Result<T, Error>;
