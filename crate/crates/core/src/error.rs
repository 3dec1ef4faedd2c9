use std::io;

use thiserror::Error;

/// Errors produced while encoding, building, querying or (de)serializing
/// indexes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence is not monotone at position {position}")]
    NonMonotoneInput { position: usize },
    #[error("value {value} does not fit in universe {universe}")]
    UniverseOverflow { value: u64, universe: u64 },
    #[error("position {index} out of bounds for length {len}")]
    OutOfBounds { index: u64, len: u64 },
    #[error("values of range [{begin}, {end}) are not strictly increasing")]
    RangeNotSorted { begin: u64, end: u64 },
    #[error("invalid range layout: {0}")]
    InvalidRanges(String),
    #[error("input triples are not sorted at position {position}")]
    UnsortedInput { position: usize },
    #[error("first-level IDs are not dense: expected {expected}, found {found}")]
    NonDenseFirstLevel { expected: u64, found: u64 },
    #[error("duplicate triple at position {position}")]
    DuplicateTriple { position: usize },
    #[error("pattern prefix is not indexed")]
    PrefixNotFound,
    #[error("child {child} is not a child of {parent}")]
    ChildNotFound { parent: u64, child: u64 },
    #[error("trie level {0} has no children statistics (expected 1 or 2)")]
    InvalidLevel(u8),
    #[error("pattern shape {0} is not supported by this operation")]
    UnsupportedShape(String),
    #[error("{component} ID {id} out of range (count {count})")]
    IdOutOfRange {
        component: &'static str,
        id: u64,
        count: u64,
    },
    #[error("cannot build an index over zero triples")]
    EmptyInput,
    #[error("corrupt container: {0}")]
    CorruptContainer(String),
    #[error("unsupported container version {found:?}")]
    VersionMismatch { found: String },
    #[error("term not found")]
    NotFound,
    #[error("malformed line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
