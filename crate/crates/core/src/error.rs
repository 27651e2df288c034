use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmvError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("value out of range at position {pos}: {msg}")]
    Range { pos: usize, msg: String },

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("degenerate lattice: the Gram matrix has determinant 0")]
    Degenerate,

    #[error("signature ({n_plus},{n_minus}) not supported: {reason}")]
    Signature {
        n_plus: usize,
        n_minus: usize,
        reason: String,
    },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("criterion not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid discriminant form: {0}")]
    InvalidForm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("surrogate search exhausted: {0}")]
    SearchExhausted(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl OmvError {
    /// Process exit code used by the `omv` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            OmvError::Parse { .. } | OmvError::Range { .. } => 2,
            OmvError::InvalidGram(_) | OmvError::Degenerate | OmvError::Signature { .. } => 3,
            OmvError::PrecisionExhausted(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, OmvError>;
