//! Field of definition of a gluing isometry given by a matrix over k(√g).
//!
//! With σ the nontrivial k-automorphism of k(√g), the projective class of
//! `A` is defined over k exactly when `A⁻¹·σ(A)` is a scalar matrix.

use serde::Serialize;

use crate::arith::{Matrix, QuadElem, RadicalElem};
use crate::forms::DiagonalForm;

use super::GluingError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefField {
    Base,
    /// k(√g)
    Quadratic(#[serde(serialize_with = "ser_scalar")] QuadElem),
}

fn ser_scalar<S: serde::Serializer>(e: &QuadElem, s: S) -> Result<S::Ok, S::Error> {
    crate::arith::ScalarWire::from_elem(e).serialize(s)
}

/// How `σ(A)` relates to `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaRelation {
    /// `σ(A) = c·A`.
    Projective,
    /// `σ(A) = c·A·ρ`, `ρ = diag(1, …, 1, −1)`.
    Reflection,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldOfDefinition {
    pub field: DefField,
    pub relation: SigmaRelation,
    /// `λ` with `target ∘ A = λ·source`.
    pub factor: RadicalElem,
}

/// `diag(1, …, 1, −1)`.
pub fn reflection(n: usize) -> Matrix<RadicalElem> {
    let mut r = Matrix::<RadicalElem>::identity(n);
    if n > 0 {
        r.set(n - 1, n - 1, RadicalElem::base(QuadElem::int(-1)));
    }
    r
}

fn normalize(a: &Matrix<RadicalElem>, g: &QuadElem, root: Option<&QuadElem>) -> Matrix<RadicalElem> {
    a.map(|e| match root {
        Some(r) => RadicalElem::base(e.u() + &(e.v() * r)),
        None => RadicalElem::new(e.u().clone(), e.v().clone(), g.clone()),
    })
}

/// Field of definition of `A` viewed as a similitude `target ∘ A = λ·source`.
///
/// With `allow_reflection`, a relation `σ(A) = c·A·ρ` is reported as
/// [`SigmaRelation::Reflection`]; the field is still k(√g).
pub fn field_of_definition_between(
    a: &Matrix<RadicalElem>,
    g: &QuadElem,
    source: &DiagonalForm,
    target: &DiagonalForm,
    allow_reflection: bool,
) -> Result<FieldOfDefinition, GluingError> {
    let n = source.rank();
    if target.rank() != n || !a.is_square() || a.rows() != n {
        return Err(GluingError::Shape { expected: n, rows: a.rows(), cols: a.cols() });
    }
    let k = source.field().join(target.field())?;
    let g = g.in_field(k).map_err(|_| GluingError::BadGenerator)?;
    if g.is_zero() {
        return Err(GluingError::BadGenerator);
    }
    let root = g.sqrt();
    let a = normalize(a, &g, root.as_ref());
    if a.determinant().is_none_or(|d| d.is_zero()) {
        return Err(GluingError::Singular);
    }

    let lift = |f: &DiagonalForm| f.gram().map(|e| RadicalElem::base(e.clone()));
    let composed = a.transpose().mul(&lift(target)).mul(&a);
    let src = lift(source);
    let factor = composed.get(0, 0).times(&src.get(0, 0).inverse().expect("entries are nonzero"));
    if factor.is_zero() || composed != src.scale(&factor) {
        return Err(GluingError::NotSimilitude);
    }

    if root.is_some() {
        return Ok(FieldOfDefinition { field: DefField::Base, relation: SigmaRelation::Projective, factor });
    }
    let m = a.inverse().ok_or(GluingError::Singular)?.mul(&a.conjugate());
    let relation = if m.as_scalar().is_some() {
        SigmaRelation::Projective
    } else if allow_reflection && m == reflection(n).scale(m.get(0, 0)) {
        SigmaRelation::Reflection
    } else {
        SigmaRelation::General
    };
    let field = match relation {
        SigmaRelation::Projective => DefField::Base,
        _ => DefField::Quadratic(g),
    };
    Ok(FieldOfDefinition { field, relation, factor })
}

/// Field of definition of a similitude of a single form.
pub fn field_of_definition(
    a: &Matrix<RadicalElem>,
    g: &QuadElem,
    f: &DiagonalForm,
    allow_reflection: bool,
) -> Result<FieldOfDefinition, GluingError> {
    field_of_definition_between(a, g, f, f, allow_reflection)
}
