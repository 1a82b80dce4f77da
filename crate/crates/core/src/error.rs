use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The CLI maps `Input` and `Capability` to exit code 2 and `Verification`
/// to exit code 1. `Internal` indicates a broken invariant inside the
/// library itself.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("capability exceeded: {0}")]
    Capability(String),
    #[error("verification failed: {what}; witness: {witness}")]
    Verification { what: String, witness: String },
    #[error("internal failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub fn verification(what: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Verification {
            what: what.into(),
            witness: witness.into(),
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
