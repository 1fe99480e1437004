use thiserror::Error;

use crate::detach::FeasibilityReport;
use crate::hypercore::{HingeRef, VertexId};

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("color {color} out of range 1..={k}")]
    ColorOutOfRange { color: usize, k: usize },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("stale or invalid hinge reference {0:?}")]
    InvalidHinge(HingeRef),

    /// `n <= h` and similar degenerate inputs the construction does not cover.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("parameters are not factorizable")]
    Infeasible(Box<FeasibilityReport>),

    /// An internal invariant failed. Never caused by user input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("input too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
