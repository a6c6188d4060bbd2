use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum NovikovError {
    #[error("input error: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    /// `∂_degree ∘ ∂_{degree+1}` has a nonzero entry at (row, col).
    #[error("boundary of boundary is nonzero in degree {degree} at ({row}, {col}): {entry}")]
    Validation { degree: usize, row: usize, col: usize, entry: String },

    #[error("element is not invertible under the polytope finiteness condition: {0}")]
    NotInvertibleUnderPolytope(String),

    #[error("ambiguous leading term: {0}")]
    AmbiguousLeadingTerm(String),

    #[error("truncation order {order} too small, increase order")]
    IncreaseOrder { order: String },

    #[error("relator {relator} is not in the kernel of the deck map")]
    CoverMismatch { relator: String },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl NovikovError {
    pub fn kind(&self) -> &'static str {
        match self {
            NovikovError::Input(_) => "input",
            NovikovError::DimensionMismatch { .. } => "dimension_mismatch",
            NovikovError::Parse(_) => "parse",
            NovikovError::Validation { .. } => "validation",
            NovikovError::NotInvertibleUnderPolytope(_) => "not_invertible_under_polytope",
            NovikovError::AmbiguousLeadingTerm(_) => "ambiguous_leading_term",
            NovikovError::IncreaseOrder { .. } => "increase_order",
            NovikovError::CoverMismatch { .. } => "cover_mismatch",
            NovikovError::InvalidMatching(_) => "invalid_matching",
            NovikovError::Json(_) => "json",
            NovikovError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, NovikovError>;

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(NovikovError::Input(msg.into()))
}
