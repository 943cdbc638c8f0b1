use thiserror::Error;

/// Errors raised by the spectrum routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("monomial mask {mask:#b} uses variables beyond x{m}")]
    MonomialOutOfRange { mask: u32, m: u32 },

    #[error("row index {index} outside [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate row index {0}")]
    DuplicateIndex(usize),

    #[error("block-length exponent {0} is not supported")]
    UnsupportedExponent(u32),

    #[error("information set is not decreasing: {0}")]
    NotDecreasing(String),

    #[error("pattern size {i} outside [0, {n}]")]
    PatternSizeOutOfRange { i: usize, n: usize },

    #[error("pattern length {pattern} does not match code length {code}")]
    LengthMismatch { pattern: usize, code: usize },

    #[error("information bit {0} lies inside the rate-matching pattern")]
    InfoInPattern(usize),

    #[error("cannot puncture every coordinate")]
    FullyPunctured,

    #[error("operation requires {expected} pattern, got {found}")]
    WrongPattern {
        expected: &'static str,
        found: String,
    },

    #[error("shortening pattern does not respect binary domination")]
    NotDominated,

    #[error("prefix of length {len} exceeds code length {n}")]
    PrefixTooLong { len: usize, n: usize },

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("affine map matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("noise standard deviation must be positive, got {0}")]
    InvalidSigma(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
