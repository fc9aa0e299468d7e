use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing input file {0}")]
    MissingInput(PathBuf),

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: u64, message: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("scoring provider unavailable: {0}")]
    ProviderUnavailable(String),

    #[error("no score recorded for sentence {0:?}")]
    TextNotFound(String),

    #[error("malformed provider response: {0}")]
    MalformedResponse(String),

    #[error("sentences scored by different models ({0} vs {1})")]
    ModelMismatch(String, String),

    #[error("noise scale must be positive, got {0}")]
    InvalidBeta(f64),

    #[error("empty token sequence")]
    EmptyTokens,

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("no alternatives for perceived sentence {0:?}")]
    EmptyAlternatives(String),

    #[error("alternatives mix perceived sentences {0:?} and {1:?}")]
    MixedPerceived(String, String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("missing cell: item {item_id}, condition {condition}")]
    MissingCell { item_id: String, condition: String },

    #[error("unmatched join on {what}: {count} rows (first: {example})")]
    UnmatchedJoin {
        what: &'static str,
        count: usize,
        example: String,
    },

    #[error("unknown predictor {0:?}")]
    UnknownPredictor(String),

    #[error("optimizer did not converge after {iterations} iterations (gradient max-norm {grad_norm:.3e})")]
    NotConverged { iterations: usize, grad_norm: f64 },

    #[error("complete or quasi-complete separation: likelihood is unbounded along {0}")]
    Separation(String),

    #[error("fits were estimated on different data")]
    DataMismatch,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingInput(path)
        } else {
            Error::Io { path, source }
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UnknownPredictor(_) => 2,
            Error::MissingInput(_) => 3,
            Error::ProviderUnavailable(_)
            | Error::TextNotFound(_)
            | Error::MalformedResponse(_)
            | Error::ModelMismatch(..) => 4,
            Error::NotConverged { .. } | Error::Separation(_) => 5,
            _ => 1,
        }
    }
}
