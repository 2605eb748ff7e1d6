use thiserror::Error;

use crate::model::Contact;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid contact {contact}: {reason}")]
    Validation { contact: Contact, reason: String },

    #[error("out of range: {0}")]
    Range(String),

    #[error("unsupported semantics: {0}")]
    Semantics(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("decoding error: {0}")]
    Decoding(String),

    #[error("symbol {0} is not in the dictionary")]
    UnknownSymbol(u64),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported container: {0}")]
    UnsupportedVersion(String),

    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
