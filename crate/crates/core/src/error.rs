use thiserror::Error;

/// Errors produced by the simulator and search routines.
#[derive(Debug, Error)]
pub enum RacError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("conditioning on an outcome with probability {0:e}")]
    NullEvent(f64),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl RacError {
    /// Process exit code for the command-line front end:
    /// 1 for configuration/input errors, 2 for domain preconditions, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RacError::Config(_) | RacError::Json(_) => 1,
            RacError::InvalidArgument(_)
            | RacError::InvalidState(_)
            | RacError::NullEvent(_)
            | RacError::DegenerateState(_) => 2,
            RacError::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, RacError>;
