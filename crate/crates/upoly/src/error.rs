use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("ball contains zero; reciprocal is undefined")]
    BallContainsZero,
    #[error("scalars belong to different coefficient fields")]
    FieldMismatch,
    #[error("polynomial has repeated roots; squarefree input required here")]
    NotSquarefree,
    #[error("root isolation did not converge within {max_bits} bits of working precision")]
    PrecisionExhausted { max_bits: u32 },
    #[error("{0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("unexpected character '{ch}' at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at byte {pos}")]
    Expected { expected: &'static str, pos: usize },
    #[error("sqrt argument must be a positive rational constant, got {0}")]
    BadSqrtArgument(String),
    #[error("division by zero in constant expression")]
    ZeroDivisor,
    #[error("only division by nonzero constants is supported")]
    NonConstantDivisor,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("at most one distinct sqrt kernel is supported, found {0} and {1}")]
    MixedKernels(String, String),
    #[error("exponent too large: {0}")]
    ExponentTooLarge(String),
    #[error("number literal '{0}' is malformed")]
    BadNumber(String),
}

pub type Result<T> = std::result::Result<T, Error>;
