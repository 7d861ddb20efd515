use thiserror::Error;

/// Errors raised by the symbolic engine and its front ends.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("total degree {degree} exceeds the configured limit {limit}")]
    DegreeLimit { degree: u32, limit: u32 },
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("denominator vanishes at the given assignment")]
    DenominatorVanishes,
    #[error("derivation word of length {needed} exceeds the context limit {max}")]
    WordLength { needed: usize, max: usize },
    #[error("derivation letter D{letter} is outside the alphabet of size {alphabet}")]
    UnknownLetter { letter: usize, alphabet: usize },
    #[error("jet context would hold {needed} symbols, more than the limit {limit}")]
    Capacity { needed: usize, limit: usize },
    #[error("points belong to different jet contexts")]
    ContextMismatch,
    #[error("expected {expected} points, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("level n = {n} is outside the supported range 1..={max}")]
    LevelOutOfRange { n: usize, max: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("witness search exhausted after {attempts} attempts")]
    SearchExhausted { attempts: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
