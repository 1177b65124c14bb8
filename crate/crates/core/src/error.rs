use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the inputs
/// violated a precondition of the operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),

    #[error("symbol {symbol} is outside the alphabet of size {q}")]
    SymbolOutOfRange { symbol: u32, q: u32 },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u32, right: u32 },

    #[error("{0} requires a non-empty sequence")]
    EmptySequence(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("edit op #{op_index} has position {position} but the string has length {len}")]
    ScriptPosition {
        op_index: usize,
        position: usize,
        len: usize,
    },

    #[error("level {level}: block length {block_len} does not divide {parent_len}")]
    Divisibility {
        level: usize,
        block_len: usize,
        parent_len: usize,
    },

    #[error("outer list decoder found {found} candidates, above the cap of {cap}")]
    ListOverflow { cap: usize, found: usize },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
