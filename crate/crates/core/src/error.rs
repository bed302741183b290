use thiserror::Error;

use crate::lve::SolveStats;

pub type Result<T> = std::result::Result<T, LimidError>;

/// Broad classes of failure, used by front-ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Resource,
    Numeric,
}

#[derive(Debug, Error)]
pub enum LimidError {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid diagram at {path}: {message}")]
    Invalid { path: String, message: String },

    #[error("cpts.{variable}: column for parent configuration ({configuration}) sums to {sum}, expected 1")]
    Normalization {
        variable: String,
        configuration: String,
        sum: f64,
    },

    #[error("strategy has no policy for decision `{0}`")]
    MissingPolicy(String),

    #[error("invalid policy for decision `{decision}`: {message}")]
    InvalidPolicy { decision: String, message: String },

    #[error(
        "decision `{decision}` has {count} policies, above the limit of {limit}; \
         enable the parentless-decision transformation or raise the threshold"
    )]
    PolicyCount {
        decision: String,
        count: String,
        limit: u64,
    },

    #[error("strategy space has {count} strategies, above the enumeration cap of {cap}")]
    EnumerationCap { count: String, cap: u64 },

    #[error("{reason} (after {} elimination steps)", .stats.per_step_cardinalities.len())]
    ResourceLimit {
        reason: String,
        stats: Box<SolveStats>,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LimidError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            LimidError::PolicyCount { .. }
            | LimidError::EnumerationCap { .. }
            | LimidError::ResourceLimit { .. } => ErrorKind::Resource,
            LimidError::Numeric(_) => ErrorKind::Numeric,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        LimidError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for LimidError {
    fn from(err: serde_json::Error) -> Self {
        LimidError::Parse(err.to_string())
    }
}
