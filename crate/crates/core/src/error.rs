use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not in A0 (valuation {valuation})")]
    NotInA0 { valuation: i64 },
    #[error("pole at t = {0}")]
    PoleAt(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("module is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("no singular vector of weight {0}")]
    NoSingularVector(String),
    #[error("generators do not span the module")]
    DoesNotSpan,
    #[error("restricted form is degenerate on {0}")]
    DegenerateRestriction(String),
    #[error("linear system has no solution over Q(t)")]
    NoSolution,
    #[error("solution exists over Q(t) but a coefficient has valuation {valuation}: {detail}")]
    NotInA0Solution { valuation: i64, detail: String },
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("negative leading exponent {0} in q -> 0 limit")]
    NegativeExponent(i64),
    #[error("limit does not converge: {0}")]
    NonConvergent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
