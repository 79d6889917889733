//! Exact de Rham cohomology of spaces presented by charts glued along
//! affine relation blocks, with trigonometric-polynomial forms and exact
//! coefficients.

use thiserror::Error;

pub mod complexes;
pub mod frontend;
pub mod homology;
pub mod linalg;
pub mod presentation;
pub mod products;
pub mod report;
pub mod scalars;
pub mod trigform;
pub mod verify;

pub use complexes::{CochainComplex, Cochain, ComplexKind, FrequencyClasses, GradedMap, Truncation};
pub use frontend::{parse_exponent, parse_form, parse_presentation, print_form, print_presentation, ParseError};
pub use homology::{class_of, cohomology, homotopy_check, les_check, ClassCoords, CohomologyBasis, LesReport};

pub use presentation::{GlobalForm, PlotRef, Presentation};
pub use scalars::{Scalar, ScalarExponent};
pub use trigform::{AffineMap, TrigForm, TrigPoly};

/// Engine failures, grouped by the process exit code they map to.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Presentation(#[from] presentation::PresentationError),
    #[error("{0}")]
    Input(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("truncation not closed along relation `{relation}`: {witness}")]
    TruncationNotClosed { relation: String, witness: String },
    #[error("form leaves the truncation window: {0}")]
    OutsideWindow(String),
    #[error("plot is not quotient-like: {0}")]
    NotQuotientLike(String),
    #[error("no lift in the trigonometric-polynomial class: {0}")]
    NoInClassLift(String),
    #[error("lift is not unique: solution space of dimension {dimension}")]
    NonUnique { dimension: usize },
    #[error("internal guard failed: {0}")]
    Guard(String),
}

impl EngineError {
    /// 1 failed mathematical check, 2 bad input, 3 truncation not closed,
    /// 4 internal guard failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::Parse(_)
            | EngineError::Presentation(_)
            | EngineError::Input(_)
            | EngineError::NotACocycle(_)
            | EngineError::DegreeOutOfRange { .. }
            | EngineError::PreconditionViolated(_) => 2,
            EngineError::TruncationNotClosed { .. } | EngineError::OutsideWindow(_) => 3,
            EngineError::NotQuotientLike(_) | EngineError::NoInClassLift(_) | EngineError::NonUnique { .. } => 1,
            EngineError::Guard(_) => 4,
        }
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        EngineError::Guard(msg.into())
    }
}

impl From<trigform::TrigError> for EngineError {
    fn from(e: trigform::TrigError) -> Self {
        EngineError::Presentation(e.into())
    }
}
