use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word size {0} is not supported (expected 1..=32 bits)")]
    WordSize(u32),

    #[error("rotation amount {amount} out of range for {bits}-bit words")]
    RotationOutOfRange { amount: u32, bits: u32 },

    #[error("expected {expected} key words, got {got}")]
    KeyLength { expected: usize, got: usize },

    #[error("requested {requested} rounds but the key schedule only has {available}")]
    RoundsExceedSchedule { requested: usize, available: usize },

    #[error("brute force at n={0} is too costly (limit is n <= {max})", max = crate::diff::BRUTE_FORCE_MAX_BITS)]
    BruteForceTooLarge(u32),

    #[error("pair count {count} over 2^{bits} pairs is not a dyadic probability")]
    NotDyadic { count: u64, bits: u32 },

    #[error("invalid threshold {0}: must be a positive probability")]
    InvalidThreshold(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Reasons a serialized pDDT is rejected on load.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic bytes, not a pDDT file")]
    BadMagic,

    #[error("unsupported pDDT format version byte {0:#04x}")]
    UnsupportedVersion(u8),

    #[error("word size {0} cannot be stored in the pDDT format (max 16)")]
    WordSize(u8),

    #[error("file truncated: expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },

    #[error("{0} trailing bytes after the last entry")]
    TrailingData(u64),

    #[error("entry {index} is out of canonical order or duplicated")]
    Unsorted { index: u64 },

    #[error("entry {index} has weight {weight}, outside the table's admissible range")]
    InvalidWeight { index: u64, weight: u8 },

    #[error("entry {index} has a difference wider than the table's word size")]
    ValueOutOfRange { index: u64 },
}
