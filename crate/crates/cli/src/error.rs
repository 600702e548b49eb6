use oscillab_core::Error;
use thiserror::Error as ThisError;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("unknown experiment {name:?}; registered experiments: {}", registered.join(", "))]
    UnknownExperiment { name: String, registered: Vec<&'static str> },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error("output error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

impl CliError {
    /// 2 for bad input, 3 for capacity or precision limits, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownExperiment { .. } | CliError::InvalidParam(_) => 2,
            CliError::Core(Error::Capacity { .. } | Error::Precision { .. }) => 3,
            CliError::Core(Error::Config(_) | Error::Domain(_) | Error::Length(_) | Error::Json(_)) => 2,
            _ => 1,
        }
    }

    pub fn hint(&self) -> Option<String> {
        match self {
            CliError::Core(Error::Capacity { limit, .. }) => Some(format!(
                "reduce --n, --grid-q or --grid-r so the run stays within {limit}"
            )),
            CliError::Core(Error::Precision { horizon, .. }) => Some(format!(
                "use at most {horizon} terms, or an exact (rational or quadratic) parameter"
            )),
            CliError::Core(Error::CorruptCache { .. }) => {
                Some("run `oscillab cache purge` and rebuild the table".into())
            }
            _ => None,
        }
    }
}
