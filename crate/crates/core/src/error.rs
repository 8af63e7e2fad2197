use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid flux specification `{spec}`: {reason}")]
    FluxSpec { spec: String, reason: String },

    /// One entry per violated hypothesis or limit.
    #[error("configuration rejected:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),

    #[error("initial data rejected: {0}")]
    InitialData(String),

    /// Nonfinite state or flux values. Usually means the grid or time step
    /// does not resolve the solution.
    #[error("numerical blow-up at t = {t}: {detail}")]
    BlowUp { t: f64, detail: String },

    #[error("snapshot out of order: t = {t} is not after t = {previous}")]
    OutOfOrder { t: f64, previous: f64 },

    #[error("checkpoint digest {found} does not match configuration digest {expected}")]
    DigestMismatch { expected: String, found: String },

    #[error("checkpoint format: {0}")]
    Checkpoint(String),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BlowUp { .. } => 2,
            _ => 1,
        }
    }
}
