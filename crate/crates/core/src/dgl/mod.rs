//! Finite presentations of profree differential graded Lie algebras and their
//! homology on truncation windows.

mod homology;
mod presentation;

pub use homology::{homology, indecomposables, ChainComplex, ChainSlice, HomologyTable};
pub use presentation::{derive, DSquaredReport, DSquaredViolation, DglPresentation};

use crate::freelie::{FreeLieError, TruncationWindow};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DglError {
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error("differential of `{0}` is not a Lie element")]
    NotLie(String),
    #[error("differential of `{generator}` must have degree {expected}, found terms of degree {found}")]
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: u32,
    },
    #[error("`{0}` has degree 0 and must have zero differential")]
    DegreeZeroDiff(String),
    #[error("differential of `{0}` has a constant term")]
    ConstantTerm(String),
    #[error("differential of `{generator}` does not square to zero: ∂∂{generator} = {residual}")]
    DSquared { generator: String, residual: String },
    #[error("differential of `{generator}` lowers weight ({found} < {weight})")]
    WeightDecreasing { generator: String, weight: u32, found: u32 },
    #[error("differential given twice for `{0}`")]
    DuplicateDiff(String),
    #[error("lower central series needs a zero differential (`{0}` has ∂ ≠ 0)")]
    NonzeroDiff(String),
    #[error("requested weight {requested} exceeds window {window}")]
    BeyondWindow { requested: u32, window: TruncationWindow },
    #[error("regrading makes the differential of `{0}` inhomogeneous")]
    Inhomogeneous(String),
    #[error("regrading changes the sign of the pair ({0}, {1})")]
    ParityChange(String, String),
    #[error("element does not belong to this presentation")]
    ForeignElement,
}
