use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by scoring, analytics, simulation and the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least 3 claims, got {0}")]
    TooFewClaims(usize),

    #[error("self-scoring: source {0} cannot be its own peer")]
    SelfScoring(usize),

    #[error("source {source_index} has no peers to be scored against")]
    NoPeers { source_index: usize },

    #[error("peer weights sum to zero for source {source_index}")]
    ZeroWeights { source_index: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("malformed input: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("score is NaN")]
    NanScore,

    #[error("no separation: truthful mean {truthful} must exceed deviation mean {deviation}")]
    NoSeparation { truthful: f64, deviation: f64 },

    #[error("insufficient claims for source {source_id}: {count} after deduplication, need at least 3")]
    InsufficientClaims { source_id: String, count: usize },

    #[error("provider failure for source {source_id} during {stage}: {message}")]
    Provider {
        source_id: String,
        stage: &'static str,
        message: String,
    },

    #[error("stance extraction failed for {} of {} cells (first: {})", .failed.len(), .failed.len() + .completed.len(), .failed.first().map(|f| f.to_string()).unwrap_or_default())]
    Extraction {
        completed: Vec<ExtractionRecord>,
        failed: Vec<ExtractionFailure>,
    },

    #[error("llm request failed: {0}")]
    Llm(String),

    #[error("missing credential: environment variable {0} is not set")]
    MissingCredential(String),

    #[error("experiment assertion failed: {0}")]
    Assertion(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// Process exit code for the CLI: 3 data, 4 provider, 5 assertion.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Provider { .. }
            | Error::Extraction { .. }
            | Error::Llm(_)
            | Error::MissingCredential(_) => 4,
            Error::Assertion(_) => 5,
            _ => 3,
        }
    }
}

/// One completed (source, claim) stance in a partial-results manifest.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExtractionRecord {
    pub source_id: String,
    pub claim_id: String,
    pub stance: crate::model::Stance,
}

/// One failed (source, claim) extraction in a partial-results manifest.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExtractionFailure {
    pub source_id: String,
    pub claim_id: String,
    pub message: String,
}

impl std::fmt::Display for ExtractionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}: {}", self.source_id, self.claim_id, self.message)
    }
}
