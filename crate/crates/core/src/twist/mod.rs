//! Twist isometries: 2×2 building blocks, block-diagonal assembly,
//! certificates for the twist conditions, and the closed-form families.

mod block;
mod families;
mod lemma;
mod search;
mod table1;

use thiserror::Error;

use crate::arith::{ArithError, Field};
use crate::forms::FormError;
use crate::gluing::GluingError;
use crate::squareclass::SquareClassError;

pub use block::{assemble, verify_block, Assembly, BlockCheck, TwistBlock};
pub use families::{build_odd_twist, build_quadfield_twist, QuadTwist, QUAD_SCALING_BOUND};
pub use lemma::{one_step_plan, verify_lemma61, LemmaChecks, TwistCertificate};
pub use search::{search_blocks, worker_count, SearchBounds};
pub use table1::{reproduce_table1, table1_rows, Table1Row, TABLE1_JSON};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("shape mismatch: form of rank {rank}, matrix {rows}x{cols}")]
    Shape { rank: usize, rows: usize, cols: usize },
    #[error("d = {0} must be odd, squarefree and greater than 1")]
    BadOddD(i64),
    #[error("dimension n = {0} must be even and at least 4")]
    BadDimension(usize),
    #[error("b = {0} is rational; a non-rational element is required")]
    RationalB(String),
    #[error("b = {0} is not totally positive")]
    NotTotallyPositive(String),
    #[error("no scaling b*w^2 with w in the search window makes b - 1 negative exactly at the identity embedding")]
    NormalizationUnreachable,
    #[error("no blocks to assemble")]
    NoBlocks,
    #[error("blocks use different d: {0} and {1}")]
    MismatchedD(String, String),
    #[error("assembled form has {0} negative directions, exactly one is required")]
    NegativeDirections(usize),
    #[error("integrality over the ring of integers of Q(sqrt{0}) is not supported (m = 1 mod 4)")]
    UnsupportedRing(i64),
    #[error("entries must lie in {0}")]
    WrongField(Field),
    #[error("twist conditions fail: {0}")]
    Conditions(LemmaChecks),
    #[error("certificate claims {claimed} but verification gives {found}")]
    ClaimMismatch { claimed: String, found: String },
    #[error("invalid certificate: {0}")]
    Parse(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    SquareClass(#[from] SquareClassError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
