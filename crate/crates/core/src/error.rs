use thiserror::Error;

use crate::word::Letter;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter {0} is outside the morphism domain")]
    LetterOutsideDomain(Letter),

    #[error("letter {0} has no relabeling target")]
    UnmappedLetter(Letter),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("morphism is not prolongable on {0}")]
    NotProlongable(Letter),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("unsupported matrix dimension {0}x{0}; only 2x2 is supported")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
