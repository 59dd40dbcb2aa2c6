use thiserror::Error;

/// Errors produced by the estimator, the generators and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence `{id}` is empty; warping alignment needs at least one state")]
    EmptySequence { id: String },

    #[error("sequence `{id}` has a non-finite state at position {position}")]
    NonFiniteState { id: String, position: usize },

    #[error("sequence `{id}` has length {found}, expected {expected}")]
    LengthMismatch {
        id: String,
        expected: usize,
        found: usize,
    },

    #[error("need ≥ 2 individuals, got {found}")]
    TooFewIndividuals { found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series is constant; cannot standardize")]
    ConstantSeries,

    #[error("series too short: need at least {needed} values, got {found}")]
    SeriesTooShort { needed: usize, found: usize },

    #[error("enumeration cap exceeded: lengths {len_a}×{len_b} above cap {cap}")]
    OracleCapExceeded {
        len_a: usize,
        len_b: usize,
        cap: usize,
    },

    #[error("no delay estimate for true edge {src} -> {dst}")]
    MissingEstimate { src: usize, dst: usize },

    #[error("layer partitions cover different vertex sets ({left} vs {right} vertices)")]
    CoverMismatch { left: usize, right: usize },

    #[error("input format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for malformed input, 3 for numerically
    /// degenerate input, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::NonFiniteState { .. }
            | Error::LengthMismatch { .. }
            | Error::CoverMismatch { .. }
            | Error::InvalidParameter(_) => 2,
            Error::EmptySequence { .. }
            | Error::TooFewIndividuals { .. }
            | Error::EmptyInput(_)
            | Error::ConstantSeries
            | Error::SeriesTooShort { .. }
            | Error::OracleCapExceeded { .. }
            | Error::MissingEstimate { .. } => 3,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
