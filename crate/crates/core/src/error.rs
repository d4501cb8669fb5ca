use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two alphabets that had to coincide did not.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A precondition of an operation does not hold for the given arguments.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A materialization or enumeration would exceed a configured cap.
    #[error("resource cap exceeded: {what} needs {requested}, cap is {cap}")]
    ResourceCap {
        what: String,
        requested: u128,
        cap: u128,
    },

    /// An internal consistency property failed. Seeing this means a bug or a
    /// violated modelling assumption, never bad user input.
    #[error("property violated: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceCap { .. } => 3,
            Error::Contract(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn cap(what: impl Into<String>, requested: u128, cap: u128) -> Self {
        Error::ResourceCap {
            what: what.into(),
            requested,
            cap,
        }
    }
}
