use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported dimension {0}; only d = 2 and d = 4 carry the disc embedding")]
    UnsupportedDimension(usize),

    #[error("target dimension {target} is smaller than multi-index length {len}")]
    ExtensionTooShort { len: usize, target: usize },

    #[error("kernel series may diverge for d = 2 at |z w*| = {0}")]
    DivergenceRisk(f64),

    #[error("point outside the closed unit disc: |z| = {0}")]
    OutsideDisc(f64),

    #[error("table covers |n| <= {available}, but n = {requested} was requested")]
    TableTooShort { requested: i64, available: usize },

    #[error("witness truncation {have} is below the required {need}")]
    TruncationTooSmall { have: usize, need: usize },

    #[error("exact coefficients are not available in this kernel sequence")]
    MissingExactCoefficients,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
