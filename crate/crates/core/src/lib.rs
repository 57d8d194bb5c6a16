//! Exact computation of adjoint trace fields of gluings of arithmetic
//! hyperbolic pieces.
//!
//! Pieces are symbolic records `(k, f₀, a, n)`; the crate decides
//! equivalence and similarity of the underlying quadratic forms through
//! local invariants, folds gluing plans into multiquadratic trace fields, and
//! builds certified twist isometries. Every computation is exact.

pub mod arith;
pub mod forms;
pub mod gluing;
pub mod local;
pub mod report;
pub mod squareclass;
pub mod twist;
