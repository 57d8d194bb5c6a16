use num_bigint::BigInt;

use crate::arith::{rat, rat2, square_class, Embedding, Field, Matrix, QuadElem};
use crate::forms::DiagonalForm;

use super::block::{assemble, TwistBlock};
use super::lemma::{verify_lemma61, TwistCertificate};
use super::TwistError;

fn ints(field: Field, v: &[i64]) -> DiagonalForm {
    DiagonalForm::from_ints(field, v).expect("nonzero entries")
}

fn check_dimension(n: usize) -> Result<(), TwistError> {
    if n < 4 || n % 2 == 1 {
        return Err(TwistError::BadDimension(n));
    }
    Ok(())
}

/// `f₀ = ⟨−1,1⟩ ⊥ ⟨d,1⟩ ⊥ ⋯` with `A₀ = diag(A₁, A₂, …)`, `d = 2b + 1`.
pub fn build_odd_twist(d: i64, n: usize) -> Result<TwistCertificate, TwistError> {
    if d <= 1 || d % 2 == 0 || square_class(&rat(d))? != BigInt::from(d) {
        return Err(TwistError::BadOddD(d));
    }
    check_dimension(n)?;
    let b = (d - 1) / 2;
    let q = Field::Rationals;
    let mut blocks = vec![TwistBlock {
        q: ints(q, &[-1, 1]),
        a: Matrix::from_ints(&[&[b + 1, b], &[-b, -(b + 1)]]),
        d: QuadElem::int(d),
    }];
    for _ in 1..n / 2 {
        blocks.push(TwistBlock { q: ints(q, &[d, 1]), a: Matrix::from_ints(&[&[0, 1], &[d, 0]]), d: QuadElem::int(d) });
    }
    let asm = assemble(&blocks)?;
    verify_lemma61(&asm.f0, &asm.d, &asm.a0)
}

/// Largest denominator or numerator tried when rescaling `b`.
pub const QUAD_SCALING_BOUND: i64 = 10;

const UNIT_EXPONENTS: [i32; 5] = [0, 1, -1, 2, -2];
const UNIT_SEARCH_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadTwist {
    pub certificate: TwistCertificate,
    /// The element passed in.
    pub b: QuadElem,
    /// `b·w²`, the element actually used.
    pub b_used: QuadElem,
    pub w: QuadElem,
}

fn fundamental_unit(m: i64) -> Option<QuadElem> {
    let m = m as u128;
    for y in 1..=UNIT_SEARCH_LIMIT as u128 {
        let t = m * y * y;
        for v in [t - 1, t + 1] {
            let x = v.isqrt();
            if x * x == v {
                let f = Field::RealQuadratic(m as i64);
                return QuadElem::new(rat(x as i64), rat(y as i64), f).ok();
            }
        }
    }
    None
}

fn normalized(b: &QuadElem) -> bool {
    let c = b - &QuadElem::one();
    c.sign_at(Embedding::Identity) < 0 && c.sign_at(Embedding::Conjugate) > 0
}

fn scalings(field: Field) -> Vec<QuadElem> {
    let unit = field.radicand().and_then(fundamental_unit);
    let mut out = Vec::new();
    for c in 1..=QUAD_SCALING_BOUND {
        for k in UNIT_EXPONENTS {
            let u = match (&unit, k) {
                (_, 0) => QuadElem::one(),
                (Some(e), k) => e.pow(k),
                (None, _) => continue,
            };
            out.push(&u * &QuadElem::int(c));
            if c > 1 {
                out.push(&u * &QuadElem::rational(rat2(1, c)));
            }
        }
    }
    out
}

/// `f₀ = ⟨b−1, 1⟩ ⊥ ⟨b, 1⟩ ⊥ ⋯` over `k = ℚ(√m)`, after rescaling `b` by a
/// square so that `b − 1` is negative exactly at the identity embedding.
pub fn build_quadfield_twist(b: &QuadElem, n: usize) -> Result<QuadTwist, TwistError> {
    if b.is_rational() {
        return Err(TwistError::RationalB(b.to_string()));
    }
    if !b.is_totally_positive() {
        return Err(TwistError::NotTotallyPositive(b.to_string()));
    }
    check_dimension(n)?;
    let k = b.field();
    let (w, bb) = scalings(k)
        .into_iter()
        .map(|w| {
            let bb = b * &(&w * &w);
            (w, bb)
        })
        .find(|(_, bb)| normalized(bb))
        .ok_or(TwistError::NormalizationUnreachable)?;
    let one = QuadElem::one();
    let form = |e: Vec<QuadElem>| DiagonalForm::new(k, e);
    let mut blocks = vec![TwistBlock {
        q: form(vec![&bb - &one, one.clone()])?,
        a: Matrix::from_rows(vec![vec![one.clone(), one.clone()], vec![&bb - &one, -&one]]).expect("2x2"),
        d: bb.clone(),
    }];
    for _ in 1..n / 2 {
        blocks.push(TwistBlock {
            q: form(vec![bb.clone(), one.clone()])?,
            a: Matrix::from_rows(vec![vec![QuadElem::zero(), one.clone()], vec![bb.clone(), QuadElem::zero()]])
                .expect("2x2"),
            d: bb.clone(),
        });
    }
    let asm = assemble(&blocks)?;
    let certificate = verify_lemma61(&asm.f0, &asm.d, &asm.a0)?;
    Ok(QuadTwist { certificate, b: b.clone(), b_used: bb, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::q_sqrt2;
    use crate::twist::verify_block;

    #[test]
    fn odd_family_examples() {
        let c = build_odd_twist(3, 4).unwrap();
        assert_eq!(c.f0, ints(Field::Rationals, &[-1, 1, 3, 1]));
        let c = build_odd_twist(15, 6).unwrap();
        assert_eq!(c.resulting_field.label(), "Q(sqrt(15))");
        assert_eq!(build_odd_twist(9, 4), Err(TwistError::BadOddD(9)));
        assert_eq!(build_odd_twist(6, 4), Err(TwistError::BadOddD(6)));
        assert_eq!(build_odd_twist(3, 5), Err(TwistError::BadDimension(5)));
    }

    #[test]
    fn unit_search() {
        assert_eq!(fundamental_unit(2).unwrap(), QuadElem::from_ints(1, 1, q_sqrt2()).unwrap());
        let f = Field::RealQuadratic(3);
        assert_eq!(fundamental_unit(3).unwrap(), QuadElem::from_ints(2, 1, f).unwrap());
    }

    #[test]
    fn quadratic_family_for_two_plus_sqrt2() {
        let k = q_sqrt2();
        let b = QuadElem::from_ints(2, 1, k).unwrap();
        let t = build_quadfield_twist(&b, 4).unwrap();
        // b − 1 = 1 + √2 is negative only at the conjugate embedding; w = ε⁻¹.
        assert_eq!(t.b_used, QuadElem::from_ints(2, -1, k).unwrap());
        assert!(t.certificate.checks.all_pass());
        assert_eq!(t.certificate.resulting_field.generators().len(), 1);
        assert!(t.certificate.resulting_field.contains_class(&b).unwrap());
    }

    #[test]
    fn quadratic_block_identities() {
        let k = q_sqrt2();
        let b = QuadElem::from_ints(2, 1, k).unwrap();
        let one = QuadElem::one();
        let q = DiagonalForm::new(k, vec![&b - &one, one.clone()]).unwrap();
        let a = Matrix::from_rows(vec![vec![one.clone(), one.clone()], vec![&b - &one, -&one]]).unwrap();
        assert!(verify_block(&q, &a, &b).unwrap().passed());
    }

    #[test]
    fn quadratic_family_rejections() {
        assert_eq!(build_quadfield_twist(&QuadElem::int(4), 4), Err(TwistError::RationalB("4".into())));
        let neg = QuadElem::from_ints(1, 1, q_sqrt2()).unwrap();
        assert!(matches!(build_quadfield_twist(&neg, 4), Err(TwistError::NotTotallyPositive(_))));
    }
}
