use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{Field, Matrix, QuadElem, RadicalElem, ScalarWire};
use crate::forms::{orthogonal_sum, DiagonalForm};
use crate::gluing::{field_of_definition, DefField, GluingError, GluingPlan, GluingStep, IsometrySpec};
use crate::squareclass::MultiquadraticField;

use super::block::{coerce_matrix, matrix_wire};
use super::TwistError;

/// Outcome of each twist condition for `(f₀, a, A₀)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaChecks {
    /// `f₀∘A₀ = a·f₀`
    pub condition1: bool,
    /// `(1/a)·A₀²` has entries in the ring of integers.
    pub condition2_integral: bool,
    /// `f₀∘((1/a)·A₀²) = f₀`
    pub condition2_orthogonal: bool,
    pub a_nonsquare: bool,
    pub a_totally_positive: bool,
    pub f0_admissible: bool,
}

impl LemmaChecks {
    fn named(&self) -> [(&'static str, bool); 6] {
        [
            ("condition (1)", self.condition1),
            ("condition (2) integrality", self.condition2_integral),
            ("condition (2) orthogonality", self.condition2_orthogonal),
            ("a not a square", self.a_nonsquare),
            ("a totally positive", self.a_totally_positive),
            ("f0 admissible", self.f0_admissible),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.named().iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.named().iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }
}

impl fmt::Display for LemmaChecks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures();
        if failed.is_empty() {
            f.write_str("all conditions hold")
        } else {
            f.write_str(&failed.join(", "))
        }
    }
}

/// A verified twist: the closing-up isometry `diag(A₀/√a, 1)` of
/// `f₀ ⊥ ⟨1⟩` has field of definition `k(√a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistCertificate {
    pub f0: DiagonalForm,
    pub a: QuadElem,
    pub a0: Matrix<QuadElem>,
    pub checks: LemmaChecks,
    pub resulting_field: MultiquadraticField,
    pub below_scope: bool,
}

impl Serialize for TwistCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TwistCertificate", 6)?;
        st.serialize_field("f0", &self.f0)?;
        st.serialize_field("a", &ScalarWire::from_elem(&self.a))?;
        st.serialize_field("A0", &matrix_wire(&self.a0))?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("resulting_field", &self.resulting_field)?;
        st.serialize_field("below_scope", &self.below_scope)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateWire {
    f0: DiagonalForm,
    a: ScalarWire,
    #[serde(rename = "A0")]
    a0: Vec<Vec<ScalarWire>>,
    #[serde(default)]
    checks: Option<LemmaChecks>,
    #[serde(default)]
    resulting_field: Option<MultiquadraticField>,
    #[serde(default)]
    below_scope: Option<bool>,
}

impl TwistCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    /// Reads `f₀`, `a`, `A₀` and re-runs the verification; claimed checks
    /// and fields, when present, must agree with the recomputed ones.
    pub fn from_json(text: &str) -> Result<Self, TwistError> {
        let w: CertificateWire = serde_json::from_str(text).map_err(|e| TwistError::Parse(e.to_string()))?;
        let k = w.f0.field();
        let a = w.a.to_elem(k)?;
        let rows =
            w.a0.iter()
                .map(|r| r.iter().map(|e| e.to_elem(k)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
        let a0 = Matrix::from_rows(rows).ok_or_else(|| TwistError::Parse("ragged matrix".into()))?;
        let cert = verify_lemma61(&w.f0, &a, &a0)?;
        if let Some(c) = w.checks {
            if c != cert.checks {
                return Err(TwistError::ClaimMismatch { claimed: c.to_string(), found: cert.checks.to_string() });
            }
        }
        if let Some(f) = w.resulting_field {
            if f != cert.resulting_field {
                return Err(TwistError::ClaimMismatch { claimed: f.label(), found: cert.resulting_field.label() });
            }
        }
        if let Some(b) = w.below_scope {
            if b != cert.below_scope {
                return Err(TwistError::ClaimMismatch {
                    claimed: format!("below_scope {b}"),
                    found: cert.below_scope.to_string(),
                });
            }
        }
        Ok(cert)
    }
}

fn integral(e: &QuadElem) -> bool {
    e.is_integral_coords()
}

/// Checks the twist conditions for `(f₀, a, A₀)` and computes the field of
/// definition of the resulting closing-up isometry.
pub fn verify_lemma61(f0: &DiagonalForm, a: &QuadElem, a0: &Matrix<QuadElem>) -> Result<TwistCertificate, TwistError> {
    let n = f0.rank();
    if a0.rows() != n || a0.cols() != n {
        return Err(TwistError::Shape { rank: n, rows: a0.rows(), cols: a0.cols() });
    }
    let k = f0.field();
    if let Field::RealQuadratic(m) = k {
        if m.rem_euclid(4) == 1 {
            return Err(TwistError::UnsupportedRing(m));
        }
    }
    let a = a.in_field(k).map_err(|_| TwistError::WrongField(k))?;
    let a0 = coerce_matrix(a0, f0)?;
    let gram = f0.gram();

    let condition1 = f0.compose(&a0) == gram.scale(&a);
    let (condition2_integral, condition2_orthogonal) = match a.inverse() {
        Some(inv) => {
            let b = a0.mul(&a0).scale(&inv);
            let integral_ok = b.entries().all(integral);
            (integral_ok, f0.compose(&b) == gram)
        }
        None => (false, false),
    };
    let checks = LemmaChecks {
        condition1,
        condition2_integral,
        condition2_orthogonal,
        a_nonsquare: !a.is_zero() && !a.is_square(),
        a_totally_positive: a.is_totally_positive(),
        f0_admissible: f0.is_admissible(),
    };
    if !checks.all_pass() {
        return Err(TwistError::Conditions(checks));
    }

    let root_inv = RadicalElem::sqrt_of(a.clone()).inverse().expect("a is nonzero");
    let mut full = Matrix::<RadicalElem>::identity(n + 1);
    for i in 0..n {
        for j in 0..n {
            full.set(i, j, root_inv.scale(a0.get(i, j)));
        }
    }
    let f = orthogonal_sum(f0, &DiagonalForm::new(k, vec![QuadElem::one()])?)?;
    let fod = field_of_definition(&full, &a, &f, true)?;
    if fod.field != DefField::Quadratic(a.clone()) {
        return Err(TwistError::Gluing(GluingError::Inconsistent {
            piece: "twist".into(),
            detail: "closing-up isometry is defined over the base field".into(),
        }));
    }
    let resulting_field = MultiquadraticField::from_generators(k, [&a])?;
    Ok(TwistCertificate { f0: f0.clone(), a, a0, checks, resulting_field, below_scope: n < 4 })
}

/// The one-step plan closing up the piece of `f₀ ⊥ ⟨1⟩` by the twist.
pub fn one_step_plan(cert: &TwistCertificate) -> Result<GluingPlan, GluingError> {
    let plan = GluingPlan::new(
        cert.f0.clone(),
        vec![("M1".to_string(), QuadElem::one())],
        vec![GluingStep::Twist {
            piece: "M1".to_string(),
            iso: IsometrySpec::TwistBlock { a0: cert.a0.clone(), a: cert.a.clone() },
        }],
    )?;
    Ok(plan.with_metadata("construction", "twist"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gluing::trace_field;

    fn q(v: &[i64]) -> DiagonalForm {
        DiagonalForm::from_ints(Field::Rationals, v).unwrap()
    }

    fn d3() -> (DiagonalForm, Matrix<QuadElem>) {
        let a0 = Matrix::from_ints(&[&[2, 1, 0, 0], &[-1, -2, 0, 0], &[0, 0, 0, 1], &[0, 0, 3, 0]]);
        (q(&[-1, 1, 3, 1]), a0)
    }

    #[test]
    fn certificate_for_d3() {
        let (f0, a0) = d3();
        let cert = verify_lemma61(&f0, &QuadElem::int(3), &a0).unwrap();
        assert!(cert.checks.all_pass());
        assert_eq!(cert.resulting_field.label(), "Q(sqrt(3))");
        let plan = one_step_plan(&cert).unwrap();
        assert_eq!(trace_field(&plan).unwrap().verdict.trace_field, cert.resulting_field);
    }

    #[test]
    fn identity_fails_condition_one() {
        let (f0, _) = d3();
        let err = verify_lemma61(&f0, &QuadElem::int(2), &Matrix::identity(4)).unwrap_err();
        match err {
            TwistError::Conditions(c) => {
                assert!(!c.condition1);
                assert!(c.failures().contains(&"condition (1)"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn square_a_is_refused() {
        let f0 = q(&[-1, 1, 4, 1]);
        let a0 = Matrix::from_ints(&[&[2, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 2]]);
        match verify_lemma61(&f0, &QuadElem::int(4), &a0) {
            Err(TwistError::Conditions(c)) => assert_eq!(c.failures(), vec!["a not a square"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unsupported_ring() {
        let k = Field::RealQuadratic(5);
        let f0 = DiagonalForm::from_ints(k, &[-1, 1]).unwrap();
        assert_eq!(verify_lemma61(&f0, &QuadElem::int(2), &Matrix::identity(2)), Err(TwistError::UnsupportedRing(5)));
    }

    #[test]
    fn json_round_trip_and_tamper_detection() {
        let (f0, a0) = d3();
        let cert = verify_lemma61(&f0, &QuadElem::int(3), &a0).unwrap();
        let text = cert.to_json();
        assert_eq!(TwistCertificate::from_json(&text).unwrap(), cert);
        let tampered = text.replace(
            r#""generators": [
      "3"
    ]"#,
            r#""generators": [
      "5"
    ]"#,
        );
        assert_ne!(tampered, text);
        assert!(matches!(TwistCertificate::from_json(&tampered), Err(TwistError::ClaimMismatch { .. })));
    }
}
