use crate::exact::Rational;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("enumeration too large: {count} items exceeds cap {cap}")]
    EnumerationTooLarge { count: String, cap: u64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("probabilities sum to {total}, expected 1 (is the process logically consistent?)")]
    Normalization { total: String },

    #[error("process is not logically consistent")]
    Inconsistent,

    #[error("table is not deterministic: column {column} has no single entry equal to 1")]
    NotDeterministic { column: usize },

    #[error("promise violated: total weight {total_weight} (expected exactly one fixed point)")]
    PromiseViolation { total_weight: Rational },

    #[error("outcome is not deterministic: {0}")]
    Indeterminate(String),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub(crate) fn too_large(count: impl ToString, cap: u64) -> Self {
        Error::EnumerationTooLarge { count: count.to_string(), cap }
    }
}
