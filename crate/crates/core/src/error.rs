use thiserror::Error;

/// Error taxonomy shared by the whole library.
///
/// The grouping mirrors the CLI exit-code classes: `Verification` means a
/// mathematical property that should hold was found violated, `Budget` and
/// `Undecided` mean a search gave up before reaching an answer, everything
/// else is a malformed input or configuration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("singular model: discriminant is zero")]
    SingularModel,

    #[error("point at infinity reached: {0}")]
    TorsionPoint(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("search budget exhausted: {0}")]
    Budget(String),

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cache corrupt: {0}")]
    CacheCorrupt(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit-code class used by the CLI: 1 verification failure, 2 input
    /// error, 3 budget/undecided.
    pub fn exit_class(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::Budget(_) | Error::Undecided(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
