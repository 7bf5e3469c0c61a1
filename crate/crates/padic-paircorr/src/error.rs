//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("digit {digit} out of range for base {p}")]
    DigitOutOfRange { digit: u64, p: u64 },

    #[error("digit list must be non-empty")]
    EmptyDigits,

    #[error("operand mismatch: {0}")]
    OperandMismatch(String),

    #[error("value {0} is outside [0, 1)")]
    OutsideUnitInterval(String),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(String),

    #[error("alpha must be a rational in (0, 1], got {0}")]
    AlphaOutOfRange(String),

    #[error("denominator must be nonzero")]
    ZeroDenominator,

    #[error("cannot parse {input:?} as an exact rational: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("precision too small: radius class {needed} exceeds the {have} stored digits")]
    PrecisionTooSmall { needed: u32, have: usize },

    #[error("radicands {n1} and {n2} collide at precision {m}; increase the digit count")]
    PrecisionCollision { n1: u64, n2: u64, m: usize },

    #[error("requested {requested} elements but the sequence holds {available}")]
    SequenceTooShort { requested: usize, available: usize },

    #[error("malformed sequence header: {0}")]
    MalformedHeader(String),

    #[error("line {line}: expected {expected} digits, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: invalid digit {text}")]
    BadDigit { line: usize, text: String },

    #[error("cannot parse CSV row: {0}")]
    ParseCsv(String),

    #[error("enumeration budget exceeded: {size} elements, budget {budget}")]
    EnumerationBudget { size: String, budget: u64 },

    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
