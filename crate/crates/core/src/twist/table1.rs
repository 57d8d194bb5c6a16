use serde::Deserialize;
use serde_json::json;

use crate::arith::{Field, Matrix, QuadElem};
use crate::forms::DiagonalForm;
use crate::report::{Report, Status};
use crate::squareclass::MultiquadraticField;

use super::block::{assemble, verify_block, TwistBlock};
use super::lemma::verify_lemma61;
use super::TwistError;

/// The ten rows realizing ℚ(√d) for even `d ≤ 42`.
pub const TABLE1_JSON: &str = include_str!("../../data/table1.json");

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table1Row {
    pub d: i64,
    pub q1: Vec<i64>,
    pub a1: Vec<Vec<i64>>,
    pub q2: Vec<i64>,
    pub a2: Vec<Vec<i64>>,
}

impl Table1Row {
    fn form(v: &[i64]) -> Result<DiagonalForm, TwistError> {
        Ok(DiagonalForm::from_ints(Field::Rationals, v)?)
    }

    fn matrix(rows: &[Vec<i64>]) -> Matrix<QuadElem> {
        let r: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Matrix::from_ints(&r)
    }

    pub fn block1(&self) -> Result<TwistBlock, TwistError> {
        Ok(TwistBlock { q: Self::form(&self.q1)?, a: Self::matrix(&self.a1), d: QuadElem::int(self.d) })
    }

    pub fn block2(&self) -> Result<TwistBlock, TwistError> {
        Ok(TwistBlock { q: Self::form(&self.q2)?, a: Self::matrix(&self.a2), d: QuadElem::int(self.d) })
    }
}

pub fn table1_rows() -> Vec<Table1Row> {
    serde_json::from_str(TABLE1_JSON).expect("embedded table parses")
}

fn lemma_result(blocks: &[TwistBlock], d: i64) -> serde_json::Value {
    let asm = match assemble(blocks) {
        Ok(a) => a,
        Err(e) => return json!({"pass": false, "error": e.to_string()}),
    };
    match verify_lemma61(&asm.f0, &asm.d, &asm.a0) {
        Ok(cert) => {
            let expected = MultiquadraticField::from_generators(Field::Rationals, [&QuadElem::int(d)])
                .expect("rational generator");
            json!({
                "pass": cert.resulting_field == expected,
                "f0": asm.f0.to_string(),
                "checks": cert.checks,
                "resulting_field": cert.resulting_field.label(),
            })
        }
        Err(TwistError::Conditions(c)) => json!({"pass": false, "f0": asm.f0.to_string(), "checks": c}),
        Err(e) => json!({"pass": false, "error": e.to_string()}),
    }
}

/// Verifies every row: both block identities, the twist conditions on the
/// 5-variable data `f₀ = q₁`, `A₀ = A₁`, admissibility and the field ℚ(√d).
pub fn reproduce_table1() -> Report {
    let mut r = Report::new("table1: twists realizing Q(sqrt d) for even d <= 42");
    let mut passed = 0usize;
    let rows = table1_rows();
    for row in &rows {
        let (b1, b2) = match (row.block1(), row.block2()) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                r.step(format!("row d={}", row.d), json!({"d": row.d}), json!({"error": e.to_string()}), "Table 1");
                r.degrade(Status::Fail);
                continue;
            }
        };
        let check = |b: &TwistBlock| verify_block(&b.q, &b.a, &b.d).ok();
        let (c1, c2) = (check(&b1), check(&b2));
        let blocks_ok = c1.is_some_and(|c| c.passed()) && c2.is_some_and(|c| c.passed());
        let lemma = lemma_result(std::slice::from_ref(&b1), row.d);
        let lemma_ok = lemma["pass"] == json!(true);
        let admissible = b1.q.is_admissible();
        let extension = lemma_result(&[b1.clone(), b2.clone()], row.d);
        let ok = blocks_ok && lemma_ok && admissible;
        passed += usize::from(ok);
        r.step(
            format!("row d={}", row.d),
            json!({"d": row.d, "q1": b1.q.to_string(), "q2": b2.q.to_string()}),
            json!({
                "pass": ok,
                "block1": c1,
                "block2": c2,
                "lemma_n4": lemma,
                "admissible": admissible,
                "extension_n6": extension,
            }),
            "Table 1",
        );
        r.degrade(Status::from_bool(ok));
    }
    r.data = json!({"rows": rows.len(), "passed": passed});
    r.conclusion = format!("{passed}/{} rows pass", rows.len());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_ten_rows() {
        let rows = table1_rows();
        let ds: Vec<i64> = rows.iter().map(|r| r.d).collect();
        assert_eq!(ds, vec![2, 6, 10, 14, 22, 26, 30, 34, 38, 42]);
        assert!(rows.iter().all(|r| r.a1.len() == 4 && r.a2.len() == 2));
    }

    #[test]
    fn row_six_passes() {
        let row = table1_rows().into_iter().find(|r| r.d == 6).unwrap();
        let asm = assemble(&[row.block1().unwrap()]).unwrap();
        let cert = verify_lemma61(&asm.f0, &asm.d, &asm.a0).unwrap();
        assert_eq!(cert.resulting_field.label(), "Q(sqrt(6))");
    }

    #[test]
    fn every_row_satisfies_the_twist_conditions() {
        for row in table1_rows() {
            let b1 = row.block1().unwrap();
            let cert = verify_lemma61(&b1.q, &b1.d, &b1.a).unwrap();
            assert_eq!(cert.resulting_field.generators(), vec![QuadElem::int(row.d)], "d = {}", row.d);
            assert!(row.block2().unwrap().check().unwrap().passed(), "d = {}", row.d);
        }
    }
}
