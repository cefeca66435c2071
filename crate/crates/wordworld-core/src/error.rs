//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown ontology node `{0}`")]
    UnknownNode(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("unknown object handle `{0}`")]
    UnknownHandle(String),
    #[error("no lexicon entry registered for ontology node `{0}`")]
    MissingLexicalization(String),
    #[error("malformed lexicon entry for `{node}`: {reason}")]
    MalformedLexEntry { node: String, reason: String },
    #[error("template variable `{0}` has an empty filler set")]
    EmptyFillerSet(String),
    #[error("template instantiation space is empty")]
    EmptyInstantiationSpace,
    #[error("variable `{0}` is required by a condition but is not bound")]
    UnboundVariable(String),
    #[error("no structural schema for object type `{0}`")]
    MissingSchema(String),
    #[error("no action description for `{0}`")]
    MissingActionDescription(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("validation failed:\n{0}")]
    ValidationFailed(String),
    #[error("unknown format version {found} (supported: {supported})")]
    UnknownFormatVersion { found: u32, supported: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<ron::error::SpannedError> for Error {
    fn from(e: ron::error::SpannedError) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<ron::Error> for Error {
    fn from(e: ron::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
