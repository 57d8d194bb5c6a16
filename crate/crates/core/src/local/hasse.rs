//! Hasse invariants of diagonal forms over ℚ.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{square_class, support_primes, Embedding, Rational};
use crate::forms::DiagonalForm;

use super::hilbert::{hilbert_symbol, Place};
use super::LocalError;

fn rational_entries(f: &DiagonalForm) -> Result<Vec<Rational>, LocalError> {
    f.rational_entries().ok_or(LocalError::NotOverQ)
}

/// `ε_v(f) = ∏_{i<j} (d_i, d_j)_v`.
pub fn hasse_invariant(f: &DiagonalForm, v: Place) -> Result<i8, LocalError> {
    let d = rational_entries(f)?;
    let mut eps = 1i8;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            eps *= hilbert_symbol(&d[i], &d[j], v)?;
        }
    }
    Ok(eps)
}

/// Closed form of `ε_v(a·⟨−1, 1, …, 1⟩)` in `n` variables:
/// `(a,a)^{(n−1)(n−2)/2} · (a,−a)^{n−1}`.
pub fn scaled_hasse_formula(a: &Rational, n: usize, v: Place) -> Result<i8, LocalError> {
    if n < 2 {
        return Err(LocalError::RankTooSmall(n));
    }
    let aa = hilbert_symbol(a, a, v)?;
    let a_neg = hilbert_symbol(a, &-a, v)?;
    let e1 = (n - 1) * (n - 2) / 2;
    let e2 = n - 1;
    let pow = |s: i8, e: usize| if e.is_multiple_of(2) { 1 } else { s };
    Ok(pow(aa, e1) * pow(a_neg, e2))
}

/// `{∞} ∪ {p | 2·∏ num·den}` for the given forms: outside this set every
/// Hasse invariant involved is +1.
pub fn relevant_places(forms: &[&DiagonalForm]) -> Result<Vec<Place>, LocalError> {
    let mut values = vec![crate::arith::rat(2)];
    for f in forms {
        values.extend(rational_entries(f)?);
    }
    let primes = support_primes(values.iter())?;
    let mut out = vec![Place::Real];
    out.extend(primes.into_iter().map(Place::Finite));
    Ok(out)
}

/// Rank, signature, discriminant class and the places where `ε = −1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseProfile {
    pub rank: usize,
    pub signature: (usize, usize),
    pub disc: BigInt,
    pub minus_places: Vec<Place>,
}

impl Serialize for HasseProfile {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HasseProfile", 4)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("signature", &[self.signature.0, self.signature.1])?;
        match self.disc.to_i64() {
            Some(d) => st.serialize_field("disc", &d)?,
            None => st.serialize_field("disc", &self.disc.to_string())?,
        }
        st.serialize_field("eps_minus_one", &self.minus_places)?;
        st.end()
    }
}

pub fn hasse_profile(f: &DiagonalForm) -> Result<HasseProfile, LocalError> {
    let d = rational_entries(f)?;
    let prod: Rational = d.iter().product();
    let disc = square_class(&prod)?;
    let signature = f.signature(Embedding::Identity).map_err(|_| LocalError::NotOverQ)?;
    let mut minus_places = Vec::new();
    for v in relevant_places(&[f])? {
        if hasse_invariant(f, v)? == -1 {
            minus_places.push(v);
        }
    }
    Ok(HasseProfile { rank: d.len(), signature, disc, minus_places })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Field};

    fn form(entries: &[i64]) -> DiagonalForm {
        DiagonalForm::from_ints(Field::Rationals, entries).unwrap()
    }

    fn f0(n: usize) -> Vec<i64> {
        let mut v = vec![1; n];
        v[0] = -1;
        v
    }

    #[test]
    fn hasse_examples() {
        for v in [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(7)] {
            assert_eq!(hasse_invariant(&form(&[1, 1, 1]), v).unwrap(), 1);
        }
        for a in [2i64, 3, 5, -7, 11, 30] {
            let scaled: Vec<i64> = f0(6).iter().map(|d| d * a).collect();
            for p in [2u64, 3, 5, 7, 11] {
                assert_eq!(hasse_invariant(&form(&scaled), Place::Finite(p)).unwrap(), 1);
            }
        }
        // Pairwise products for 3·⟨−1,1,1,1⟩ at 3: three (−3,3) = 1 and three (3,3) = (3,−1) = −1.
        let f = form(&[-3, 3, 3, 3]);
        let direct: i8 = {
            let d = [-3i64, 3, 3, 3];
            let mut e = 1;
            for i in 0..4 {
                for j in i + 1..4 {
                    e *= hilbert_symbol(&rat(d[i]), &rat(d[j]), Place::Finite(3)).unwrap();
                }
            }
            e
        };
        assert_eq!(direct, -1);
        assert_eq!(hasse_invariant(&f, Place::Finite(3)).unwrap(), -1);
    }

    #[test]
    fn scaled_formula_examples() {
        assert_eq!(scaled_hasse_formula(&rat(5), 4, Place::Finite(5)).unwrap(), 1);
        assert_eq!(scaled_hasse_formula(&rat(3), 4, Place::Finite(3)).unwrap(), -1);
        for a in [2i64, 3, -3, 7, 10, 13, -21] {
            for v in [Place::Real, Place::Finite(2), Place::Finite(3), Place::Finite(7)] {
                assert_eq!(scaled_hasse_formula(&rat(a), 6, v).unwrap(), 1);
                assert_eq!(scaled_hasse_formula(&rat(a), 10, v).unwrap(), 1);
            }
        }
        assert!(scaled_hasse_formula(&rat(3), 1, Place::Real).is_err());
    }

    #[test]
    fn profile_examples() {
        let p = hasse_profile(&form(&[1, 1])).unwrap();
        assert_eq!((p.rank, p.signature, p.disc.clone()), (2, (2, 0), BigInt::from(1)));
        assert!(p.minus_places.is_empty());

        let p = hasse_profile(&form(&f0(7))).unwrap();
        assert_eq!((p.rank, p.signature, p.disc.clone()), (7, (6, 1), BigInt::from(-1)));
        assert!(p.minus_places.is_empty());

        // Only the pair (3, −1) is nontrivial: (3,−1)_2 = −1, (3,−1)_3 = −1.
        let p = hasse_profile(&form(&[3, -1, 1, 1, 1])).unwrap();
        assert_eq!(p.minus_places, vec![Place::Finite(2), Place::Finite(3)]);
        assert_eq!(p.disc, BigInt::from(-3));
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"rank":5,"signature":[4,1],"disc":-3,"eps_minus_one":["2","3"]}"#
        );
    }

    #[test]
    fn rejects_forms_over_quadratic_fields() {
        let f = DiagonalForm::from_ints(Field::RealQuadratic(2), &[1, 1]).unwrap();
        assert!(hasse_invariant(&f, Place::Real).is_ok());
        let g = DiagonalForm::new(
            Field::RealQuadratic(2),
            vec![crate::arith::QuadElem::sqrt_radicand(Field::RealQuadratic(2)).unwrap()],
        )
        .unwrap();
        assert_eq!(hasse_invariant(&g, Place::Real), Err(LocalError::NotOverQ));
    }
}
