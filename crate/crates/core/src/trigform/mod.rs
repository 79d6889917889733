//! Exterior calculus with exact trigonometric-polynomial coefficients on
//! Euclidean charts, and affine changes of coordinates.

use thiserror::Error;

mod affine;
mod form;
mod poly;

pub use affine::AffineMap;
pub use form::{index_tuples, TrigForm};
pub use poly::{FrequencyVector, TermKey, TrigPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrigError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not an affine map: {0}")]
    NonAffine(String),
}
