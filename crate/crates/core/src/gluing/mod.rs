//! Symbolic gluing plans and their trace fields.
//!
//! A plan fixes a base field `k`, a form `f₀` of rank `n` and pieces
//! carrying the forms `f_a = f₀ ⊥ ⟨a⟩`. Each gluing step contributes the
//! field of definition of its gluing isometry; the trace field is the
//! compositum of these fields.

mod delta5;
mod engine;
mod fod;
mod plan;

use thiserror::Error;

use crate::arith::ArithError;
use crate::forms::FormError;
use crate::squareclass::SquareClassError;

pub use delta5::delta5_obstruction;
pub use engine::{
    apply_step, canonical_step_field, commensurable_pieces, trace_field, Arithmeticity, Commensurability, Evaluation,
    StepOutcome, Verdict,
};
pub use fod::{
    field_of_definition, field_of_definition_between, reflection, DefField, FieldOfDefinition, SigmaRelation,
};
pub use plan::{GluingPlan, GluingStep, IsometrySpec, Piece};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GluingError {
    #[error("unknown piece {0:?}")]
    UnknownPiece(String),
    #[error("duplicate piece label {0:?}")]
    DuplicatePiece(String),
    #[error("piece {0:?}: f0 is not admissible")]
    NotAdmissible(String),
    #[error("piece {0:?}: a must be totally positive")]
    NotTotallyPositive(String),
    #[error("f0 has rank {found}, plan declares n = {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("matrix must be {expected}x{expected}, got {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
    #[error("isometry matrix is singular")]
    Singular,
    #[error("matrix is not a similitude between the forms")]
    NotSimilitude,
    #[error("radical generator must be a nonzero element of the base field")]
    BadGenerator,
    #[error("odd-dimensional close-up of {piece:?}: {detail}")]
    Inconsistent { piece: String, detail: String },
    #[error("a twist step needs a twist_block isometry")]
    TwistNeedsBlock,
    #[error("twist_block isometries are only valid in twist or close-up steps")]
    MisplacedTwistBlock,
    #[error("twist block rejected: {0}")]
    TwistRejected(String),
    #[error("invalid plan: {0}")]
    Parse(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    SquareClass(#[from] SquareClassError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
