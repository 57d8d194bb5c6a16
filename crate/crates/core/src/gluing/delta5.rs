//! The obstruction for the 5-dimensional right-angled 24-cell quotient Δ₅.

use serde_json::json;

use crate::arith::{Field, QuadElem};
use crate::forms::DiagonalForm;
use crate::local::q_sqrt2;
use crate::report::{Report, Status};
use crate::squareclass::{field_degree, MultiquadraticField};

use super::engine::{commensurable_pieces, trace_field, Arithmeticity, Commensurability};
use super::plan::{GluingPlan, Piece};

fn lorentz(k: Field, rank: usize) -> DiagonalForm {
    DiagonalForm::standard_lorentzian(k, rank).expect("rank is positive")
}

/// Runs the Δ₅ argument: its trace field is ℚ(√2) while its ambient form
/// `⟨−1,1,1,1,1,1⟩` is not admissible over ℚ(√2), so any commensurable
/// gluing of arithmetic pieces would be defined over ℚ in dimension 5.
pub fn delta5_obstruction() -> Report {
    let k2 = q_sqrt2();
    let q = Field::Rationals;
    let mut r = Report::new("delta5: not commensurable to a gluing of arithmetic pieces");

    let f_k2 = lorentz(k2, 6);
    r.step(
        "stated_inputs",
        json!({"manifold": "Delta_5", "dimension": 5}),
        json!({"trace_field": "Q(sqrt2)", "form": f_k2.to_string()}),
        "Thm 1.3",
    );

    let admissible = f_k2.is_admissible();
    r.step("admissible", json!({"form": f_k2.to_string(), "field": k2.label()}), json!(admissible), "Thm 1.3");
    r.degrade(Status::from_bool(!admissible));

    let mut sanity_entries = vec![-QuadElem::sqrt_radicand(k2).expect("k2 is quadratic")];
    sanity_entries.extend((0..5).map(|_| QuadElem::one()));
    let sanity = DiagonalForm::new(k2, sanity_entries).expect("entries are nonzero");
    let sanity_ok = sanity.is_admissible();
    r.step(
        "admissible_sanity",
        json!({"form": sanity.to_string(), "field": k2.label()}),
        json!(sanity_ok),
        "Example 4.6",
    );
    r.degrade(Status::from_bool(sanity_ok));

    let plan = GluingPlan::canonical_chain(lorentz(q, 5), &[QuadElem::int(1), QuadElem::int(4)])
        .expect("valid plan")
        .with_metadata("purpose", "odd-dimensional gluing of commensurable arithmetic pieces");
    let verdict = trace_field(&plan).expect("canonical plans evaluate").verdict;
    let keeps_q = verdict.trace_field.is_base() && verdict.arithmeticity == Arithmeticity::QuasiArithmetic;
    r.step(
        "odd_dimensional_gluing",
        json!({"n": 5, "f0": plan.f0().to_string(), "pieces": ["1", "4"]}),
        json!({"trace_field": verdict.trace_field.label(), "verdict": verdict.arithmeticity}),
        "Thm 6.4",
    );
    r.degrade(Status::from_bool(keeps_q));

    let f0 = lorentz(q, 5);
    let p1 = Piece::new("P1", f0.clone(), QuadElem::int(1)).expect("valid piece");
    let p2 = Piece::new("P2", f0, QuadElem::int(2)).expect("valid piece");
    let c = commensurable_pieces(&p1, &p2).expect("pieces over Q compare");
    r.step("non_commensurable_pieces", json!({"n": 5, "a": ["1", "2"]}), json!(c), "Prop 5.1");
    r.degrade(Status::from_bool(c == Commensurability::NotCommensurable));

    let degree = field_degree(q, &[QuadElem::int(2)]).expect("rational generator");
    let target = MultiquadraticField::from_generators(q, &[QuadElem::int(2)]).expect("rational generator");
    let contradiction = degree == 2 && !target.is_subfield_of(&verdict.trace_field).unwrap_or(true);
    r.step(
        "contradiction",
        json!({"trace_field_delta5": target.label(), "gluing_field": verdict.trace_field.label()}),
        json!({"degree_over_Q": degree, "fields_differ": contradiction}),
        "Thm 1.3",
    );
    r.degrade(Status::from_bool(contradiction));

    r.conclusion = if r.status == Status::Pass {
        "Delta_5 has trace field Q(sqrt2), but a commensurable gluing of arithmetic pieces in odd \
         dimension 5 must have trace field Q: Delta_5 is not commensurable to any gluing of pieces \
         of arithmetic manifolds"
            .to_string()
    } else {
        "the obstruction could not be established".to_string()
    };
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_passes_and_is_deterministic() {
        let r = delta5_obstruction();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.steps[1].result, json!(false));
        assert_eq!(r.steps[2].result, json!(true));
        assert!(r.conclusion.contains("not commensurable"));
        assert_eq!(r.to_json(), delta5_obstruction().to_json());
    }
}
