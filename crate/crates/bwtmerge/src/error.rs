//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("document {index} is empty")]
    EmptyDocument { index: usize },

    #[error("collection uses {count} distinct bytes, at most 255 are supported")]
    AlphabetTooLarge { count: usize },

    #[error("collection is empty")]
    EmptyCollection,

    #[error("inputs use different alphabets (sigma {left} vs {right})")]
    AlphabetMismatch { left: u8, right: u8 },

    #[error("document {index} is not primitive (rotation by {shift} maps it onto itself)")]
    NotPrimitive { index: usize, shift: usize },

    #[error("document {second} is a rotation of document {first}")]
    RotationDuplicate { first: usize, second: usize },

    #[error("document {index} does not end with the terminator symbol")]
    MissingTerminator { index: usize },

    #[error("index data is corrupt: {reason}")]
    Corrupt { reason: String },

    #[error("pair stream is missing an entry for index {index}")]
    PairStreamMissing { index: u64 },

    #[error("pair stream has a duplicate entry for index {index}")]
    PairStreamDuplicate { index: u64 },

    #[error("pair stream index {index} is out of range for length {n}")]
    PairStreamRange { index: u64, n: usize },

    #[error("input of {n} symbols exceeds the brute-force construction cap of {cap}")]
    OracleCapExceeded { n: usize, cap: usize },

    #[error("bad file format: {reason}")]
    Format { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn corrupt(reason: impl Into<String>) -> Self {
        Error::Corrupt {
            reason: reason.into(),
        }
    }

    pub(crate) fn format(reason: impl Into<String>) -> Self {
        Error::Format {
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
