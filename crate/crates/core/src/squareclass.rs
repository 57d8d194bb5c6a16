//! Square classes `k*/(k*)²` and multiquadratic extensions `k(√a₁, …, √a_s)`.
//!
//! Over ℚ a class is a vector over 𝔽₂ indexed by primes and the sign, and
//! extensions are tracked by a reduced row echelon basis. Over ℚ(√m) classes
//! are compared by exact square tests on subset products.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{factorize, rat, squarefree_part, ArithError, Field, QuadElem, Rational, ScalarWire};

/// Upper bound on independent generators over a quadratic base field; the
/// membership test enumerates all subset products.
pub const MAX_QUADRATIC_GENERATORS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SquareClassError {
    #[error("zero has no square class")]
    Zero,
    #[error("element of {found} used in an extension of {expected}")]
    WrongField { expected: Field, found: Field },
    #[error("more than {0} independent generators over a quadratic base")]
    TooManyGenerators(usize),
    #[error("unrecognised base field label {0:?}")]
    BadBase(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The class of a nonzero element modulo squares of its field.
///
/// Representatives are canonical where possible: a squarefree integer `r`,
/// or `r·√m`, with `r` chosen minimal among the two integers `r` and the
/// squarefree part of `r·m` that represent the same class over ℚ(√m).
#[derive(Clone, Debug)]
pub struct SquareClass {
    field: Field,
    rep: QuadElem,
}

fn pick_rational_rep(r: BigInt, field: Field) -> BigInt {
    match field {
        Field::Rationals => r,
        Field::RealQuadratic(m) => {
            let other = squarefree_part(&Rational::from_integer(&r * m)).expect("nonzero").0;
            let key = |x: &BigInt| (x.abs(), x.is_negative());
            if key(&other) < key(&r) {
                other
            } else {
                r
            }
        }
    }
}

impl SquareClass {
    pub fn of(e: &QuadElem) -> Result<Self, SquareClassError> {
        if e.is_zero() {
            return Err(SquareClassError::Zero);
        }
        let field = e.field();
        if let Some(q) = e.as_rational() {
            let r = pick_rational_rep(squarefree_part(q)?.0, field);
            return Ok(SquareClass { field, rep: QuadElem::rational(Rational::from_integer(r)).in_field(field)? });
        }
        let sqrt_m = QuadElem::sqrt_radicand(field)?;
        for (flag, q) in [(false, e.clone()), (true, e / &sqrt_m)] {
            let Some(t) = crate::arith::rational_sqrt(&q.norm()) else { continue };
            for s in [t.clone(), -t] {
                let c = rat(2) * (q.x() + &s);
                if c.is_zero() {
                    continue;
                }
                let r = squarefree_part(&c)?.0;
                let rr = QuadElem::rational(Rational::from_integer(r.clone())).in_field(field)?;
                if (&q / &rr).is_square() {
                    let r = pick_rational_rep(r, field);
                    let base = QuadElem::rational(Rational::from_integer(r)).in_field(field)?;
                    let rep = if flag { &base * &sqrt_m } else { base };
                    return Ok(SquareClass { field, rep });
                }
            }
        }
        Ok(SquareClass { field, rep: e.clone() })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn representative(&self) -> &QuadElem {
        &self.rep
    }

    pub fn is_trivial(&self) -> bool {
        self.rep.is_square()
    }

    /// The squarefree integer representing a rational class.
    pub fn rational_rep(&self) -> Option<BigInt> {
        let q = self.rep.as_rational()?;
        q.denom().is_one().then(|| q.numer().clone())
    }

    pub fn times(&self, other: &SquareClass) -> Result<SquareClass, SquareClassError> {
        if self.field != other.field {
            return Err(SquareClassError::WrongField { expected: self.field, found: other.field });
        }
        SquareClass::of(&(&self.rep * &other.rep))
    }
}

impl PartialEq for SquareClass {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && (&self.rep * &other.rep).is_square()
    }
}

impl Eq for SquareClass {}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

// Support of a rational class over F_2: odd-exponent primes, with -1 for the sign.
fn rational_vector(q: &Rational) -> Result<BTreeSet<BigInt>, SquareClassError> {
    if q.is_zero() {
        return Err(SquareClassError::Zero);
    }
    let mut v = BTreeSet::new();
    for part in [q.numer(), q.denom()] {
        for (p, e) in factorize(part)?.factors {
            if e % 2 == 1 && !v.remove(&p) {
                v.insert(p);
            }
        }
    }
    if q.is_negative() {
        v.insert(BigInt::from(-1));
    }
    Ok(v)
}

fn xor_into(acc: &mut BTreeSet<BigInt>, row: &BTreeSet<BigInt>) {
    for p in row {
        if !acc.remove(p) {
            acc.insert(p.clone());
        }
    }
}

fn vector_product(v: &BTreeSet<BigInt>) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, p| acc * p)
}

/// `k(√a₁, …, √a_s)` for a base field `k`, stored as an independent set of
/// square classes.
#[derive(Clone, Debug)]
pub struct MultiquadraticField {
    base: Field,
    // Over Q: rows of a reduced echelon form, sorted by pivot (largest prime).
    rows: Vec<BTreeSet<BigInt>>,
    // Over Q(√m): independent classes in insertion order.
    classes: Vec<SquareClass>,
}

impl MultiquadraticField {
    pub fn new(base: Field) -> Self {
        MultiquadraticField { base, rows: Vec::new(), classes: Vec::new() }
    }

    pub fn from_generators<'a>(
        base: Field,
        gens: impl IntoIterator<Item = &'a QuadElem>,
    ) -> Result<Self, SquareClassError> {
        let mut k = MultiquadraticField::new(base);
        for g in gens {
            k.adjoin(g)?;
        }
        Ok(k)
    }

    pub fn base(&self) -> Field {
        self.base
    }

    /// Number of independent generators.
    pub fn rank(&self) -> usize {
        match self.base {
            Field::Rationals => self.rows.len(),
            Field::RealQuadratic(_) => self.classes.len(),
        }
    }

    /// Degree over the base field, `2^rank`.
    pub fn degree(&self) -> u64 {
        1u64 << self.rank()
    }

    pub fn is_base(&self) -> bool {
        self.rank() == 0
    }

    fn coerce(&self, g: &QuadElem) -> Result<QuadElem, SquareClassError> {
        if g.is_zero() {
            return Err(SquareClassError::Zero);
        }
        g.in_field(self.base).map_err(|_| SquareClassError::WrongField { expected: self.base, found: g.field() })
    }

    fn reduce_rational(&self, g: &Rational) -> Result<BTreeSet<BigInt>, SquareClassError> {
        let mut v = rational_vector(g)?;
        for row in &self.rows {
            let pivot = row.last().expect("rows are nonempty");
            if v.contains(pivot) {
                xor_into(&mut v, row);
            }
        }
        Ok(v)
    }

    /// Whether `√g` already lies in this field.
    pub fn contains_class(&self, g: &QuadElem) -> Result<bool, SquareClassError> {
        let g = self.coerce(g)?;
        match self.base {
            Field::Rationals => {
                let q = g.as_rational().expect("rational base");
                Ok(self.reduce_rational(q)?.is_empty())
            }
            Field::RealQuadratic(_) => {
                let s = self.classes.len();
                for mask in 0u64..(1u64 << s) {
                    let mut prod = g.clone();
                    for (i, c) in self.classes.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            prod = &prod * c.representative();
                        }
                    }
                    if prod.is_square() {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// Adjoins `√g`; returns whether the field grew.
    pub fn adjoin(&mut self, g: &QuadElem) -> Result<bool, SquareClassError> {
        let g = self.coerce(g)?;
        match self.base {
            Field::Rationals => {
                let v = self.reduce_rational(g.as_rational().expect("rational base"))?;
                if v.is_empty() {
                    return Ok(false);
                }
                let pivot = v.last().expect("nonempty").clone();
                for row in &mut self.rows {
                    if row.contains(&pivot) {
                        xor_into(row, &v);
                    }
                }
                self.rows.push(v);
                self.rows.sort_by(|a, b| a.last().cmp(&b.last()));
                Ok(true)
            }
            Field::RealQuadratic(_) => {
                if self.contains_class(&g)? {
                    return Ok(false);
                }
                if self.classes.len() >= MAX_QUADRATIC_GENERATORS {
                    return Err(SquareClassError::TooManyGenerators(MAX_QUADRATIC_GENERATORS));
                }
                self.classes.push(SquareClass::of(&g)?);
                Ok(true)
            }
        }
    }

    /// Compositum with another extension of the same base.
    pub fn join(&self, other: &MultiquadraticField) -> Result<Self, SquareClassError> {
        if self.base != other.base {
            return Err(SquareClassError::WrongField { expected: self.base, found: other.base });
        }
        let mut out = self.clone();
        for g in other.generators() {
            out.adjoin(&g)?;
        }
        Ok(out)
    }

    /// Canonical generators: squarefree integers over ℚ, class
    /// representatives over ℚ(√m).
    pub fn generators(&self) -> Vec<QuadElem> {
        match self.base {
            Field::Rationals => {
                self.rows.iter().map(|r| QuadElem::rational(Rational::from_integer(vector_product(r)))).collect()
            }
            Field::RealQuadratic(_) => self.classes.iter().map(|c| c.representative().clone()).collect(),
        }
    }

    pub fn is_subfield_of(&self, other: &MultiquadraticField) -> Result<bool, SquareClassError> {
        if self.base != other.base {
            return Ok(false);
        }
        for g in self.generators() {
            if !other.contains_class(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Text label such as `Q(sqrt5, sqrt13)`.
    pub fn label(&self) -> String {
        let gens = self.generators();
        if gens.is_empty() {
            return self.base.label();
        }
        let inner: Vec<String> = gens.iter().map(|g| format!("sqrt({g})")).collect();
        format!("{}({})", self.base.label(), inner.join(", "))
    }

    fn to_wire(&self) -> TraceFieldWire {
        TraceFieldWire {
            base: self.base.label(),
            generators: self.generators().iter().map(ScalarWire::from_elem).collect(),
        }
    }
}

impl PartialEq for MultiquadraticField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.rank() == other.rank() && self.is_subfield_of(other).unwrap_or(false)
    }
}

impl fmt::Display for MultiquadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `2^rank` of the classes of `gens` over `base`.
pub fn field_degree(base: Field, gens: &[QuadElem]) -> Result<u64, SquareClassError> {
    Ok(MultiquadraticField::from_generators(base, gens)?.degree())
}

#[derive(Serialize, Deserialize)]
struct TraceFieldWire {
    base: String,
    generators: Vec<ScalarWire>,
}

pub fn parse_base_label(s: &str) -> Result<Field, SquareClassError> {
    if s == "Q" {
        return Ok(Field::Rationals);
    }
    let m = s
        .strip_prefix("Q(sqrt")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|m| m.parse::<i64>().ok())
        .ok_or_else(|| SquareClassError::BadBase(s.to_string()))?;
    Ok(Field::real_quadratic(m)?)
}

impl Serialize for MultiquadraticField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiquadraticField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = TraceFieldWire::deserialize(d)?;
        let base = parse_base_label(&w.base).map_err(D::Error::custom)?;
        let gens =
            w.generators.iter().map(|g| g.to_elem(base)).collect::<Result<Vec<_>, _>>().map_err(D::Error::custom)?;
        MultiquadraticField::from_generators(base, &gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat2, Field};

    fn q() -> Field {
        Field::Rationals
    }

    fn q2() -> Field {
        Field::RealQuadratic(2)
    }

    fn ints(v: &[i64]) -> Vec<QuadElem> {
        v.iter().map(|&n| QuadElem::int(n)).collect()
    }

    // 2^rank by counting distinct subset products modulo squares.
    fn oracle_degree(base: Field, gens: &[QuadElem]) -> u64 {
        let mut reps: Vec<QuadElem> = Vec::new();
        for mask in 0u64..(1 << gens.len()) {
            let mut prod = QuadElem::one().in_field(base).unwrap();
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod = &prod * &g.in_field(base).unwrap();
                }
            }
            if !reps.iter().any(|r| (r * &prod).is_square()) {
                reps.push(prod);
            }
        }
        reps.len() as u64
    }

    #[test]
    fn degree_examples() {
        assert_eq!(field_degree(q(), &[]).unwrap(), 1);
        assert_eq!(field_degree(q(), &ints(&[2, 3, 6])).unwrap(), 4);
        assert_eq!(oracle_degree(q(), &ints(&[2, 3, 6])), 4);
        assert_eq!(field_degree(q(), &ints(&[65, 85])).unwrap(), 4);
        assert_eq!(field_degree(q(), &ints(&[5, 13, 17])).unwrap(), 8);
        assert_eq!(field_degree(q(), &ints(&[4, 9])).unwrap(), 1);
        assert_eq!(field_degree(q2(), &ints(&[2])).unwrap(), 1);
        assert_eq!(field_degree(q2(), &ints(&[3, 6])).unwrap(), 2);
    }

    #[test]
    fn degree_matches_subset_oracle() {
        let pools: [&[i64]; 5] = [
            &[2, 3, 5, 6, 10, 15, 30],
            &[-1, 2, -2, 7, 14, -7],
            &[12, 18, 50, 3, 75],
            &[5, 13, 17, 65, 85, 221, 1105],
            &[11, 22, 33, 6, 2, 3, 5, 7, 35, 77, 55, 10],
        ];
        for pool in pools {
            let gens = ints(pool);
            assert_eq!(field_degree(q(), &gens).unwrap(), oracle_degree(q(), &gens), "{pool:?}");
        }
        let s = QuadElem::sqrt_radicand(q2()).unwrap();
        let quad_gens = vec![
            QuadElem::int(3),
            s.clone(),
            QuadElem::from_ints(3, 1, q2()).unwrap(),
            &QuadElem::int(3) * &s,
            QuadElem::from_ints(7, 3, q2()).unwrap(),
            QuadElem::from_ints(5, 1, q2()).unwrap(),
            QuadElem::int(6),
        ];
        assert_eq!(field_degree(q2(), &quad_gens).unwrap(), oracle_degree(q2(), &quad_gens));
    }

    #[test]
    fn generators_are_canonical() {
        let k = MultiquadraticField::from_generators(q(), &ints(&[65, 85, 13])).unwrap();
        let labels: Vec<String> = k.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(labels, vec!["5", "13", "17"]);
        let other = MultiquadraticField::from_generators(q(), &ints(&[17, 5, 13])).unwrap();
        assert_eq!(k, other);
        assert_eq!(k.label(), "Q(sqrt(5), sqrt(13), sqrt(17))");
    }

    #[test]
    fn square_class_representatives() {
        let c = SquareClass::of(&QuadElem::rational(rat2(-18, 4))).unwrap();
        assert_eq!(c.rational_rep(), Some(BigInt::from(-2)));
        // (1+√2)² = 3+2√2, so 5·(3+2√2) ~ 5.
        let e = QuadElem::from_ints(15, 10, q2()).unwrap();
        assert_eq!(SquareClass::of(&e).unwrap().representative(), &QuadElem::int(5).in_field(q2()).unwrap());
        // 6 ~ 3 over Q(√2).
        let six = SquareClass::of(&QuadElem::int(6).in_field(q2()).unwrap()).unwrap();
        assert_eq!(six.representative(), &QuadElem::int(3).in_field(q2()).unwrap());
        // 2√2·(3+2√2) ~ √2.
        let s = QuadElem::sqrt_radicand(q2()).unwrap();
        let e = &(&QuadElem::int(2) * &s) * &QuadElem::from_ints(3, 2, q2()).unwrap();
        assert_eq!(SquareClass::of(&e).unwrap().representative(), &s);
        // 1+√2 is not rational times a square; it represents itself.
        let u = QuadElem::from_ints(1, 1, q2()).unwrap();
        assert_eq!(SquareClass::of(&u).unwrap().representative(), &u);
        assert!(SquareClass::of(&QuadElem::zero()).is_err());
    }

    #[test]
    fn wire_round_trip() {
        let k = MultiquadraticField::from_generators(q(), &ints(&[2])).unwrap();
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"base":"Q","generators":["2"]}"#);
        let back: MultiquadraticField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        let k2 =
            MultiquadraticField::from_generators(q2(), &[QuadElem::from_ints(3, 1, q2()).unwrap(), QuadElem::int(5)])
                .unwrap();
        let s = serde_json::to_string(&k2).unwrap();
        assert_eq!(s, r#"{"base":"Q(sqrt2)","generators":[{"x":"3","y":"1"},"5"]}"#);
        let back: MultiquadraticField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k2);
    }

    #[test]
    fn mixed_fields_rejected() {
        let mut k = MultiquadraticField::new(q());
        assert!(k.adjoin(&QuadElem::sqrt_radicand(q2()).unwrap()).is_err());
        assert!(k.adjoin(&QuadElem::zero()).is_err());
    }
}
