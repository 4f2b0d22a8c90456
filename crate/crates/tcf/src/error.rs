//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by construction and verification routines.
///
/// Contract violations (mismatched shapes, out-of-range parameters) are
/// distinguished from resource caps and from *findings*: a finding means a
/// structural identity that should hold by theory failed on concrete data,
/// which is always treated as a bug to investigate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polynomial is not primitive: multiplicative orbit of t has length {orbit}, expected {expected}")]
    NotPrimitive { orbit: u64, expected: u64 },

    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: u64, cap: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("theorem-violation finding: {0}")]
    Finding(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
