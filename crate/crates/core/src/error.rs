use thiserror::Error;

use crate::cubology_law::ValidityReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("cube size must be at least 2, got {0}")]
    InvalidSize(usize),

    #[error("IllegalDepth: depth {depth} is not a slice of a {n}x{n}x{n} cube")]
    IllegalDepth { n: usize, depth: usize },

    #[error("ParseError at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("NotAConfiguration: {0}")]
    NotAConfiguration(String),

    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a permutation")]
    NotAPermutation,

    #[error("EvenCube: move needs an odd cube, got n = {0}")]
    EvenCube(usize),

    #[error("OddCube: move needs an even cube, got n = {0}")]
    OddCube(usize),

    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),

    #[error("NotSolvable: violated {}", .0.violated().join(", "))]
    NotSolvable(Box<ValidityReport>),

    #[error("StageOrderViolation: stage {stage} requires {requirement}")]
    StageOrderViolation {
        stage: &'static str,
        requirement: &'static str,
    },

    #[error("PrecisionTooLow: ceiling not determined at {0} bits")]
    PrecisionTooLow(u32),

    #[error("DepthTooLarge: more than {0} states in the ball")]
    DepthTooLarge(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),
}

impl CubeError {
    /// Short machine-readable name used on the CLI's diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            CubeError::InvalidSize(_) => "InvalidSize",
            CubeError::IllegalDepth { .. } => "IllegalDepth",
            CubeError::Parse { .. } => "ParseError",
            CubeError::NotAConfiguration(_) => "NotAConfiguration",
            CubeError::ShapeMismatch(_) => "ShapeMismatch",
            CubeError::NotAPermutation => "NotAPermutation",
            CubeError::EvenCube(_) => "EvenCube",
            CubeError::OddCube(_) => "OddCube",
            CubeError::IndexOutOfRange(_) => "IndexOutOfRange",
            CubeError::NotSolvable(_) => "NotSolvable",
            CubeError::StageOrderViolation { .. } => "StageOrderViolation",
            CubeError::PrecisionTooLow(_) => "PrecisionTooLow",
            CubeError::DepthTooLarge(_) => "DepthTooLarge",
            CubeError::InvalidState(_) => "InvalidState",
        }
    }
}
