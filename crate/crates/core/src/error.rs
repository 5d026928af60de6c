use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes identically after substitution")]
    ZeroDenominator,
    #[error("not in configuration space: insertion points {0} and {1} coincide")]
    ConfigCollision(String, String),
    #[error("beyond truncation: requested {requested}, cutoff {cutoff}")]
    BeyondTruncation { requested: i64, cutoff: i64 },
    #[error("degenerate form at level {0}")]
    DegenerateGram(u32),
    #[error("not a coordinate change: leading coefficient vanishes")]
    NotACoordinateChange,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no composability budget: m = 0")]
    NoBudget,
    #[error("pole certificate violated: divisor {divisor}, order {order} > bound {bound}")]
    PoleCertificate {
        divisor: String,
        order: u32,
        bound: u32,
    },
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
