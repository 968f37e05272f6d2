use crate::residue::RingError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("size guard exceeded: {what} needs {size}, limit {limit}")]
    Guard { what: String, size: u64, limit: u64 },
    #[error("element is not in K_m")]
    NotInKm,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("fields not close enough at level {level}: {detail}")]
    NotClose { level: u32, detail: String },
    #[error("cache: {0}")]
    Cache(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    pub(crate) fn guard(what: impl Into<String>, size: u64, limit: u64) -> Self {
        Error::Guard {
            what: what.into(),
            size,
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
