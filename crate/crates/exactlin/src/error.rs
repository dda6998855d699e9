use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?}, expected \"p\" or \"p/q\"")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Shape disagreement between operands.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    Ambient { left: usize, right: usize },
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("vector of length {found} where {expected} was expected")]
    Length { found: usize, expected: usize },
}
