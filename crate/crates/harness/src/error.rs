use thiserror::Error;
use zerolab_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
/// At least one gated verdict failed.
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),

    #[error("task {task}: {source}")]
    Task {
        task: String,
        #[source]
        source: CoreError,
    },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Domain { .. } | CoreError::Pole { .. } | CoreError::PairBudget { .. } => EXIT_USAGE,
        CoreError::NonConvergence { .. } | CoreError::Overflow(_) => EXIT_NONCONVERGENCE,
        _ => EXIT_DATA,
    }
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => EXIT_USAGE,
            HarnessError::Task { source, .. } | HarnessError::Core(source) => core_exit_code(source),
            HarnessError::Io { .. } | HarnessError::Json(_) | HarnessError::Csv(_) => EXIT_DATA,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
