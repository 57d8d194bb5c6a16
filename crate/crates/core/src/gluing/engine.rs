//! Folding gluing plans into trace fields and arithmeticity verdicts.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::{Field, Matrix, QuadElem, RadicalElem};
use crate::forms::{equivalent_scaled_family_qsqrt2, similar_q, SimilarityVerdict};
use crate::local::{q_sqrt2, Branch};
use crate::squareclass::{MultiquadraticField, SquareClass};
use crate::twist::verify_lemma61;

use super::fod::{field_of_definition, field_of_definition_between, reflection, DefField, SigmaRelation};
use super::plan::{GluingPlan, GluingStep, IsometrySpec, Piece};
use super::GluingError;

/// Square class of `aᵢ·aⱼ` in `k`; trivial when the product is a square.
pub fn canonical_step_field(ai: &QuadElem, aj: &QuadElem, k: Field) -> Result<SquareClass, GluingError> {
    let ai = ai.in_field(k)?;
    let aj = aj.in_field(k)?;
    Ok(SquareClass::of(&(&ai * &aj))?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepOutcome {
    pub op: &'static str,
    pub field: MultiquadraticField,
    /// Generator `g` whose root the step contributes, if any.
    #[serde(serialize_with = "ser_opt_scalar")]
    pub adjoined: Option<QuadElem>,
    pub grew: bool,
    pub note: String,
}

fn ser_opt_scalar<S: Serializer>(g: &Option<QuadElem>, s: S) -> Result<S::Ok, S::Error> {
    g.as_ref().map(crate::arith::ScalarWire::from_elem).serialize(s)
}

fn outcome(
    op: &'static str,
    current: &MultiquadraticField,
    adjoined: Option<QuadElem>,
    note: impl Into<String>,
) -> Result<StepOutcome, GluingError> {
    let mut field = current.clone();
    let grew = match &adjoined {
        Some(g) => field.adjoin(g)?,
        None => false,
    };
    Ok(StepOutcome { op, field, adjoined, grew, note: note.into() })
}

fn identity(n: usize) -> Matrix<RadicalElem> {
    Matrix::<RadicalElem>::identity(n)
}

fn generator_of(d: &DefField) -> Option<QuadElem> {
    match d {
        DefField::Base => None,
        DefField::Quadratic(g) => Some(g.clone()),
    }
}

fn entrywise_in_base(a: &Matrix<RadicalElem>) -> bool {
    a.entries().all(|e| e.in_base().is_some())
}

/// Retests an odd-dimensional close-up matrix against the candidates
/// `λ·A` and `λ·A·ρ`, `λ ∈ {1, √g}`.
fn odd_close_up_witness(a: &Matrix<RadicalElem>, g: &QuadElem) -> Option<&'static str> {
    let n = a.rows();
    let root = RadicalElem::sqrt_of(g.clone());
    let one = RadicalElem::base(QuadElem::one());
    let rho = reflection(n);
    let candidates =
        [("A", &one, false), ("sqrt(g) A", &root, false), ("A rho", &one, true), ("sqrt(g) A rho", &root, true)];
    let found = candidates.into_iter().find_map(|(name, lam, with_rho)| {
        let mut m = a.scale(lam);
        if with_rho {
            m = m.mul(&rho);
        }
        let m = m.map(|e| RadicalElem::new(e.u().clone(), e.v().clone(), g.clone()));
        entrywise_in_base(&m).then_some(name)
    });
    found
}

fn explicit_step(
    op: &'static str,
    current: &MultiquadraticField,
    matrix: &Matrix<RadicalElem>,
    g: &QuadElem,
    source: &Piece,
    target: &Piece,
) -> Result<StepOutcome, GluingError> {
    let fod = field_of_definition_between(matrix, g, &source.form(), &target.form(), false)?;
    let note = match fod.relation {
        SigmaRelation::Projective => "sigma(A) is a scalar multiple of A".to_string(),
        _ => format!("sigma(A) A^-1 is not scalar; defined over k(sqrt({g}))"),
    };
    outcome(op, current, generator_of(&fod.field), note)
}

fn odd_close_up(
    current: &MultiquadraticField,
    matrix: &Matrix<RadicalElem>,
    g: &QuadElem,
    piece: &Piece,
) -> Result<StepOutcome, GluingError> {
    let fod = field_of_definition(matrix, g, &piece.form(), true)?;
    if fod.relation == SigmaRelation::Projective {
        return outcome("close_up", current, None, "odd dimension: sigma(A) is a scalar multiple of A");
    }
    match odd_close_up_witness(matrix, g) {
        Some(w) => outcome("close_up", current, None, format!("odd dimension: {w} has entries in k")),
        None => Err(GluingError::Inconsistent {
            piece: piece.label().to_string(),
            detail: format!(
                "no rescaling by 1 or sqrt({g}), with or without the reflection, makes the matrix rational"
            ),
        }),
    }
}

fn twist_step(
    current: &MultiquadraticField,
    a0: &Matrix<QuadElem>,
    a: &QuadElem,
    piece: &Piece,
) -> Result<StepOutcome, GluingError> {
    let cert = verify_lemma61(piece.f0(), a, a0).map_err(|e| GluingError::TwistRejected(e.to_string()))?;
    let n = piece.dimension();
    let root_inv = RadicalElem::sqrt_of(a.clone()).inverse().ok_or(GluingError::BadGenerator)?;
    let mut full = identity(n + 1);
    for i in 0..n {
        for j in 0..n {
            full.set(i, j, root_inv.scale(a0.get(i, j)));
        }
    }
    let fod = field_of_definition(&full, a, &piece.form(), true)?;
    let g = generator_of(&fod.field);
    debug_assert_eq!(g.is_some(), !cert.resulting_field.is_base());
    outcome("twist", current, g, format!("twist isometry diag(A0/sqrt({a}), 1), relation {:?}", fod.relation))
}

/// Applies one step to the running field.
pub fn apply_step(
    current: &MultiquadraticField,
    step: &GluingStep,
    plan: &GluingPlan,
) -> Result<StepOutcome, GluingError> {
    let k = plan.base();
    if current.base() != k {
        return Err(GluingError::SquareClass(crate::squareclass::SquareClassError::WrongField {
            expected: k,
            found: current.base(),
        }));
    }
    let dim = plan.n() + 1;
    match step {
        GluingStep::Interbreed { left, right, iso } => {
            let (p, q) = (plan.piece(left)?, plan.piece(right)?);
            if p.dimension() != q.dimension() {
                return Err(GluingError::RankMismatch { expected: p.dimension(), found: q.dimension() });
            }
            match iso {
                IsometrySpec::Canonical => {
                    let c = canonical_step_field(p.a(), q.a(), k)?;
                    let g = (!c.is_trivial()).then(|| c.representative().clone());
                    outcome("interbreed", current, g, format!("canonical isometry, class of {} * {}", p.a(), q.a()))
                }
                IsometrySpec::Identity => explicit_step("interbreed", current, &identity(dim), &QuadElem::one(), p, q),
                IsometrySpec::ExplicitMatrix { matrix, generator } => {
                    explicit_step("interbreed", current, matrix, generator, p, q)
                }
                IsometrySpec::TwistBlock { .. } => Err(GluingError::MisplacedTwistBlock),
            }
        }
        GluingStep::CloseUp { piece, iso } => {
            let p = plan.piece(piece)?;
            match iso {
                IsometrySpec::Canonical => outcome("close_up", current, None, "canonical self-gluing"),
                IsometrySpec::Identity => outcome("close_up", current, None, "identity gluing"),
                IsometrySpec::ExplicitMatrix { matrix, generator } => {
                    if plan.n() % 2 == 1 {
                        odd_close_up(current, matrix, generator, p)
                    } else {
                        explicit_step("close_up", current, matrix, generator, p, p)
                    }
                }
                IsometrySpec::TwistBlock { a0, a } => twist_step(current, a0, a, p),
            }
        }
        GluingStep::Double { piece } => {
            plan.piece(piece)?;
            outcome("double", current, None, "the identity extends the gluing isometry")
        }
        GluingStep::Twist { piece, iso } => {
            let p = plan.piece(piece)?;
            match iso {
                IsometrySpec::TwistBlock { a0, a } => twist_step(current, a0, a, p),
                _ => Err(GluingError::TwistNeedsBlock),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arithmeticity {
    ArithmeticCandidate,
    Nonarithmetic,
    QuasiArithmetic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub trace_field: MultiquadraticField,
    pub arithmeticity: Arithmeticity,
    /// Rule triggering the verdict.
    pub rule: Option<String>,
}

impl Verdict {
    pub fn degree(&self) -> u64 {
        self.trace_field.degree()
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("trace_field", &self.trace_field)?;
        m.serialize_entry("degree", &self.degree())?;
        m.serialize_entry("verdict", &self.arithmeticity)?;
        if let Some(rule) = &self.rule {
            m.serialize_entry("rule", rule)?;
        }
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub verdict: Verdict,
    pub trace: Vec<StepOutcome>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Commensurability {
    Commensurable,
    NotCommensurable,
    Unknown,
}

fn is_ex46_block(f0: &crate::forms::DiagonalForm) -> bool {
    let k = q_sqrt2();
    let Ok(s) = QuadElem::sqrt_radicand(k) else { return false };
    let e = f0.entries();
    f0.field() == k && f0.rank().is_multiple_of(2) && e[0] == -s && e[1..].iter().all(|x| x.is_one())
}

fn family_ok(a: &QuadElem, n: usize) -> bool {
    if a.is_square() {
        return true;
    }
    let Some(branch) = Branch::for_dimension(n) else { return false };
    equivalent_scaled_family_qsqrt2(a, n, branch).map(|v| v.equivalent).unwrap_or(false)
}

/// Commensurability of the arithmetic groups of two pieces, decided by
/// similarity of their forms.
pub fn commensurable_pieces(p: &Piece, q: &Piece) -> Result<Commensurability, GluingError> {
    use Commensurability::*;
    if p.field() != q.field() || p.dimension() != q.dimension() {
        return Ok(NotCommensurable);
    }
    let k = p.field();
    if p.f0() == q.f0() && (p.a() / q.a()).is_square() {
        return Ok(Commensurable);
    }
    let (fp, fq) = (p.form(), q.form());
    if k.is_rationals() {
        return Ok(match similar_q(&fp, &fq)? {
            SimilarityVerdict::Similar { .. } => Commensurable,
            SimilarityVerdict::NotSimilar { .. } => NotCommensurable,
            SimilarityVerdict::Unknown { .. } => Unknown,
        });
    }
    if fp.rank() % 2 == 0 && !(&fp.determinant() * &fq.determinant()).is_square() {
        return Ok(NotCommensurable);
    }
    if p.f0() == q.f0() && is_ex46_block(p.f0()) && family_ok(p.a(), p.dimension()) && family_ok(q.a(), q.dimension()) {
        return Ok(Commensurable);
    }
    Ok(Unknown)
}

/// Folds the plan's steps into its trace field and classifies the result.
pub fn trace_field(plan: &GluingPlan) -> Result<Evaluation, GluingError> {
    let mut field = MultiquadraticField::new(plan.base());
    let mut trace = Vec::with_capacity(plan.steps().len());
    for step in plan.steps() {
        let out = apply_step(&field, step, plan)?;
        field = out.field.clone();
        trace.push(out);
    }
    let (arithmeticity, rule) = if field.degree() > 1 {
        (Arithmeticity::Nonarithmetic, Some("Thm 1.1"))
    } else {
        let pieces = plan.pieces();
        let mut all = true;
        let mut refuted = false;
        for (i, p) in pieces.iter().enumerate() {
            for q in &pieces[i + 1..] {
                match commensurable_pieces(p, q)? {
                    Commensurability::Commensurable => {}
                    Commensurability::NotCommensurable => refuted = true,
                    Commensurability::Unknown => all = false,
                }
            }
        }
        if refuted {
            (Arithmeticity::Nonarithmetic, Some("Prop 5.1"))
        } else if all {
            (Arithmeticity::QuasiArithmetic, Some("Thm 6.4"))
        } else {
            (Arithmeticity::ArithmeticCandidate, None)
        }
    };
    Ok(Evaluation { verdict: Verdict { trace_field: field, arithmeticity, rule: rule.map(str::to_string) }, trace })
}
