//! Pieces, isometry specifications, gluing steps and the plan file format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{Field, Matrix, QuadElem, RadicalElem, RadicalWire, ScalarWire};
use crate::forms::{orthogonal_sum, DiagonalForm};

use super::GluingError;

/// A fundamental piece: symbolic record `(k, f₀, a, n)` with form `f₀ ⊥ ⟨a⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    label: String,
    f0: DiagonalForm,
    a: QuadElem,
}

impl Piece {
    pub fn new(label: impl Into<String>, f0: DiagonalForm, a: QuadElem) -> Result<Self, GluingError> {
        let label = label.into();
        if !f0.is_admissible() {
            return Err(GluingError::NotAdmissible(label));
        }
        let a = a.in_field(f0.field()).map_err(|_| GluingError::NotTotallyPositive(label.clone()))?;
        if !a.is_totally_positive() {
            return Err(GluingError::NotTotallyPositive(label));
        }
        Ok(Piece { label, f0, a })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> Field {
        self.f0.field()
    }

    pub fn dimension(&self) -> usize {
        self.f0.rank()
    }

    pub fn f0(&self) -> &DiagonalForm {
        &self.f0
    }

    pub fn a(&self) -> &QuadElem {
        &self.a
    }

    /// `f_a = f₀ ⊥ ⟨a⟩`.
    pub fn form(&self) -> DiagonalForm {
        let last = DiagonalForm::new(self.field(), vec![self.a.clone()]).expect("a is nonzero");
        orthogonal_sum(&self.f0, &last).expect("same field")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsometrySpec {
    /// The identification induced by the shared block `f₀`.
    Canonical,
    Identity,
    /// A matrix with entries in k(√g).
    ExplicitMatrix {
        matrix: Matrix<RadicalElem>,
        generator: QuadElem,
    },
    /// A twist isometry `diag(A₀/√a, 1)` certified by the twist conditions.
    TwistBlock {
        a0: Matrix<QuadElem>,
        a: QuadElem,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingStep {
    Interbreed { left: String, right: String, iso: IsometrySpec },
    CloseUp { piece: String, iso: IsometrySpec },
    Double { piece: String },
    Twist { piece: String, iso: IsometrySpec },
}

impl GluingStep {
    pub fn op_name(&self) -> &'static str {
        match self {
            GluingStep::Interbreed { .. } => "interbreed",
            GluingStep::CloseUp { .. } => "close_up",
            GluingStep::Double { .. } => "double",
            GluingStep::Twist { .. } => "twist",
        }
    }

    pub fn labels(&self) -> Vec<&str> {
        match self {
            GluingStep::Interbreed { left, right, .. } => vec![left, right],
            GluingStep::CloseUp { piece, .. } | GluingStep::Double { piece } | GluingStep::Twist { piece, .. } => {
                vec![piece]
            }
        }
    }
}

/// A build script over one base field `k` and one block `f₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingPlan {
    base: Field,
    f0: DiagonalForm,
    pieces: Vec<Piece>,
    steps: Vec<GluingStep>,
    metadata: BTreeMap<String, String>,
}

impl GluingPlan {
    pub fn new(f0: DiagonalForm, pieces: Vec<(String, QuadElem)>, steps: Vec<GluingStep>) -> Result<Self, GluingError> {
        let mut built: Vec<Piece> = Vec::with_capacity(pieces.len());
        for (label, a) in pieces {
            if built.iter().any(|p| p.label == label) {
                return Err(GluingError::DuplicatePiece(label));
            }
            built.push(Piece::new(label, f0.clone(), a)?);
        }
        for step in &steps {
            for l in step.labels() {
                if !built.iter().any(|p| p.label == l) {
                    return Err(GluingError::UnknownPiece(l.to_string()));
                }
            }
        }
        Ok(GluingPlan { base: f0.field(), f0, pieces: built, steps, metadata: BTreeMap::new() })
    }

    /// A plan whose pieces are glued in a chain `P0 – P1 – … ` by canonical
    /// isometries.
    pub fn canonical_chain(f0: DiagonalForm, values: &[QuadElem]) -> Result<Self, GluingError> {
        let pieces: Vec<(String, QuadElem)> =
            values.iter().enumerate().map(|(i, a)| (format!("P{i}"), a.clone())).collect();
        let steps = (1..values.len())
            .map(|i| GluingStep::Interbreed {
                left: format!("P{}", i - 1),
                right: format!("P{i}"),
                iso: IsometrySpec::Canonical,
            })
            .collect();
        GluingPlan::new(f0, pieces, steps)
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn base(&self) -> Field {
        self.base
    }

    pub fn n(&self) -> usize {
        self.f0.rank()
    }

    pub fn f0(&self) -> &DiagonalForm {
        &self.f0
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn steps(&self) -> &[GluingStep] {
        &self.steps
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn piece(&self, label: &str) -> Result<&Piece, GluingError> {
        self.pieces.iter().find(|p| p.label == label).ok_or_else(|| GluingError::UnknownPiece(label.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, GluingError> {
        let wire: PlanWire = serde_json::from_str(text).map_err(|e| GluingError::Parse(e.to_string()))?;
        wire.into_plan()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PlanWire::from_plan(self)).expect("plans serialize")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanWire {
    base_field: Field,
    n: usize,
    f0: Vec<ScalarWire>,
    pieces: Vec<PieceWire>,
    steps: Vec<StepWire>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceWire {
    label: String,
    a: ScalarWire,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum StepWire {
    Interbreed { left: String, right: String, isometry: IsoWire },
    CloseUp { piece: String, isometry: IsoWire },
    Double { piece: String },
    Twist { piece: String, isometry: IsoWire },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum IsoWire {
    Canonical,
    Identity,
    ExplicitMatrix { generator: ScalarWire, matrix: Vec<Vec<RadicalWire>> },
    TwistBlock { a0: Vec<Vec<ScalarWire>>, a: ScalarWire },
}

fn parse_err(e: impl ToString) -> GluingError {
    GluingError::Parse(e.to_string())
}

impl IsoWire {
    fn into_spec(self, k: Field) -> Result<IsometrySpec, GluingError> {
        Ok(match self {
            IsoWire::Canonical => IsometrySpec::Canonical,
            IsoWire::Identity => IsometrySpec::Identity,
            IsoWire::ExplicitMatrix { generator, matrix } => {
                let g = generator.to_elem(k)?;
                let rows = matrix
                    .iter()
                    .map(|r| r.iter().map(|e| e.to_elem(k, &g)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let matrix = Matrix::from_rows(rows).ok_or_else(|| parse_err("ragged matrix"))?;
                IsometrySpec::ExplicitMatrix { matrix, generator: g }
            }
            IsoWire::TwistBlock { a0, a } => {
                let rows = a0
                    .iter()
                    .map(|r| r.iter().map(|e| e.to_elem(k)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let a0 = Matrix::from_rows(rows).ok_or_else(|| parse_err("ragged matrix"))?;
                IsometrySpec::TwistBlock { a0, a: a.to_elem(k)? }
            }
        })
    }

    fn from_spec(s: &IsometrySpec) -> Self {
        match s {
            IsometrySpec::Canonical => IsoWire::Canonical,
            IsometrySpec::Identity => IsoWire::Identity,
            IsometrySpec::ExplicitMatrix { matrix, generator } => IsoWire::ExplicitMatrix {
                generator: ScalarWire::from_elem(generator),
                matrix: matrix.to_rows().iter().map(|r| r.iter().map(RadicalWire::from_elem).collect()).collect(),
            },
            IsometrySpec::TwistBlock { a0, a } => IsoWire::TwistBlock {
                a0: a0.to_rows().iter().map(|r| r.iter().map(ScalarWire::from_elem).collect()).collect(),
                a: ScalarWire::from_elem(a),
            },
        }
    }
}

impl PlanWire {
    fn into_plan(self) -> Result<GluingPlan, GluingError> {
        let k = self.base_field;
        let entries = self.f0.iter().map(|e| e.to_elem(k)).collect::<Result<Vec<_>, _>>()?;
        let f0 = DiagonalForm::new(k, entries)?;
        if f0.rank() != self.n {
            return Err(GluingError::RankMismatch { expected: self.n, found: f0.rank() });
        }
        let pieces =
            self.pieces.into_iter().map(|p| Ok((p.label, p.a.to_elem(k)?))).collect::<Result<Vec<_>, GluingError>>()?;
        let steps = self
            .steps
            .into_iter()
            .map(|s| {
                Ok(match s {
                    StepWire::Interbreed { left, right, isometry } => {
                        GluingStep::Interbreed { left, right, iso: isometry.into_spec(k)? }
                    }
                    StepWire::CloseUp { piece, isometry } => GluingStep::CloseUp { piece, iso: isometry.into_spec(k)? },
                    StepWire::Double { piece } => GluingStep::Double { piece },
                    StepWire::Twist { piece, isometry } => GluingStep::Twist { piece, iso: isometry.into_spec(k)? },
                })
            })
            .collect::<Result<Vec<_>, GluingError>>()?;
        let mut plan = GluingPlan::new(f0, pieces, steps)?;
        plan.metadata = self.metadata;
        Ok(plan)
    }

    fn from_plan(p: &GluingPlan) -> Self {
        PlanWire {
            base_field: p.base,
            n: p.n(),
            f0: p.f0.entries().iter().map(ScalarWire::from_elem).collect(),
            pieces: p
                .pieces
                .iter()
                .map(|x| PieceWire { label: x.label.clone(), a: ScalarWire::from_elem(&x.a) })
                .collect(),
            steps: p
                .steps
                .iter()
                .map(|s| match s {
                    GluingStep::Interbreed { left, right, iso } => StepWire::Interbreed {
                        left: left.clone(),
                        right: right.clone(),
                        isometry: IsoWire::from_spec(iso),
                    },
                    GluingStep::CloseUp { piece, iso } => {
                        StepWire::CloseUp { piece: piece.clone(), isometry: IsoWire::from_spec(iso) }
                    }
                    GluingStep::Double { piece } => StepWire::Double { piece: piece.clone() },
                    GluingStep::Twist { piece, iso } => {
                        StepWire::Twist { piece: piece.clone(), isometry: IsoWire::from_spec(iso) }
                    }
                })
                .collect(),
            metadata: p.metadata.clone(),
        }
    }
}
