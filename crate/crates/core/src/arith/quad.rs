//! Exact elements `x + y√m` of ℚ or of a real quadratic field ℚ(√m).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::factor::factorize;
use super::rational::{format_rational, rat, rational_sqrt, Rational};
use super::ArithError;

/// Base field: ℚ itself or ℚ(√m) with `m` squarefree and at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FieldWire", into = "FieldWire")]
pub enum Field {
    Rationals,
    RealQuadratic(i64),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum FieldWire {
    Q,
    #[serde(rename = "QSqrt")]
    QSqrt {
        m: i64,
    },
}

impl TryFrom<FieldWire> for Field {
    type Error = ArithError;
    fn try_from(w: FieldWire) -> Result<Self, ArithError> {
        match w {
            FieldWire::Q => Ok(Field::Rationals),
            FieldWire::QSqrt { m } => Field::real_quadratic(m),
        }
    }
}

impl From<Field> for FieldWire {
    fn from(f: Field) -> Self {
        match f {
            Field::Rationals => FieldWire::Q,
            Field::RealQuadratic(m) => FieldWire::QSqrt { m },
        }
    }
}

impl Field {
    pub fn real_quadratic(m: i64) -> Result<Self, ArithError> {
        if m < 2 {
            return Err(ArithError::InvalidField(m));
        }
        let f = factorize(&BigInt::from(m))?;
        if f.factors.iter().any(|(_, e)| *e > 1) {
            return Err(ArithError::InvalidField(m));
        }
        Ok(Field::RealQuadratic(m))
    }

    pub fn radicand(self) -> Option<i64> {
        match self {
            Field::Rationals => None,
            Field::RealQuadratic(m) => Some(m),
        }
    }

    pub fn is_rationals(self) -> bool {
        self == Field::Rationals
    }

    /// Number of real embeddings.
    pub fn degree(self) -> usize {
        match self {
            Field::Rationals => 1,
            Field::RealQuadratic(_) => 2,
        }
    }

    /// Smallest field containing both; ℚ embeds in every ℚ(√m).
    pub fn join(self, other: Field) -> Result<Field, ArithError> {
        match (self, other) {
            (a, b) if a == b => Ok(a),
            (Field::Rationals, b) => Ok(b),
            (a, Field::Rationals) => Ok(a),
            (Field::RealQuadratic(a), Field::RealQuadratic(b)) => Err(ArithError::MixedFields(a, b)),
        }
    }

    /// Short text label, `Q` or `Q(sqrt m)`.
    pub fn label(self) -> String {
        match self {
            Field::Rationals => "Q".to_string(),
            Field::RealQuadratic(m) => format!("Q(sqrt{m})"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A real embedding of the base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    Identity,
    Conjugate,
}

/// `x + y√m`; `y` is zero whenever the field is ℚ.
///
/// Every exact scalar in the crate is a `QuadElem`. Arithmetic between a ℚ
/// element and a ℚ(√m) element promotes to ℚ(√m); mixing two different
/// radicands panics, as does division by zero.
#[derive(Clone, Debug)]
pub struct QuadElem {
    x: Rational,
    y: Rational,
    field: Field,
}

impl QuadElem {
    pub fn new(x: Rational, y: Rational, field: Field) -> Result<Self, ArithError> {
        if field.is_rationals() && !y.is_zero() {
            return Err(ArithError::IrrationalInQ);
        }
        Ok(QuadElem { x, y, field })
    }

    pub fn rational(x: Rational) -> Self {
        QuadElem { x, y: Rational::zero(), field: Field::Rationals }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    /// `√m` in ℚ(√m).
    pub fn sqrt_radicand(field: Field) -> Result<Self, ArithError> {
        match field {
            Field::Rationals => Err(ArithError::IrrationalInQ),
            Field::RealQuadratic(_) => Ok(QuadElem { x: Rational::zero(), y: Rational::one(), field }),
        }
    }

    /// Convenience `x + y√m` from integers.
    pub fn from_ints(x: i64, y: i64, field: Field) -> Result<Self, ArithError> {
        Self::new(rat(x), rat(y), field)
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Same value viewed in `field` (which must contain it).
    pub fn in_field(&self, field: Field) -> Result<Self, ArithError> {
        let f = self.field.join(field)?;
        if f != field {
            return Err(ArithError::IrrationalInQ);
        }
        Ok(QuadElem { x: self.x.clone(), y: self.y.clone(), field })
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.y.is_zero().then_some(&self.x)
    }

    fn m(&self) -> Rational {
        rat(self.field.radicand().unwrap_or(0))
    }

    /// The nontrivial automorphism `x + y√m ↦ x − y√m` (identity on ℚ).
    pub fn conjugate(&self) -> Self {
        QuadElem { x: self.x.clone(), y: -&self.y, field: self.field }
    }

    pub fn norm(&self) -> Rational {
        &self.x * &self.x - self.m() * &self.y * &self.y
    }

    pub fn trace(&self) -> Rational {
        match self.field {
            Field::Rationals => self.x.clone(),
            Field::RealQuadratic(_) => &self.x * rat(2),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(QuadElem { x: &self.x / &n, y: -&self.y / &n, field: self.field })
    }

    /// Exact sign of the image under the given real embedding.
    pub fn sign_at(&self, emb: Embedding) -> i8 {
        let y = match emb {
            Embedding::Identity => self.y.clone(),
            Embedding::Conjugate => -&self.y,
        };
        let sx = super::rational::sign(&self.x);
        let sy = super::rational::sign(&y);
        if sy == 0 || sx == sy {
            return if sx == 0 { sy } else { sx };
        }
        if sx == 0 {
            return sy;
        }
        // Opposite signs: compare x^2 with m*y^2.
        match (&self.x * &self.x).cmp(&(self.m() * &y * &y)) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => 0,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign_at(Embedding::Identity)
    }

    /// Positive under every real embedding of its field.
    pub fn is_totally_positive(&self) -> bool {
        match self.field {
            Field::Rationals => self.sign() > 0,
            Field::RealQuadratic(_) => self.sign_at(Embedding::Identity) > 0 && self.sign_at(Embedding::Conjugate) > 0,
        }
    }

    /// A square root inside the element's own field, when one exists.
    ///
    /// Solves `u² + m v² = x`, `2uv = y`. With `n = ±sqrt(norm)` this gives
    /// `u² = (x + n)/2`, and either `u = 0` (then `x = m v²`) or `v = y/(2u)`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(QuadElem { x: Rational::zero(), y: Rational::zero(), field: self.field });
        }
        let m = match self.field {
            Field::Rationals => {
                return rational_sqrt(&self.x).map(QuadElem::rational);
            }
            Field::RealQuadratic(m) => rat(m),
        };
        if self.y.is_zero() {
            // v = 0 branch: x itself a rational square.
            if let Some(u) = rational_sqrt(&self.x) {
                return Some(QuadElem { x: u, y: Rational::zero(), field: self.field });
            }
            // u = 0 branch: x = m v^2.
            return rational_sqrt(&(&self.x / &m)).map(|v| QuadElem { x: Rational::zero(), y: v, field: self.field });
        }
        let root_norm = rational_sqrt(&self.norm())?;
        let two = rat(2);
        for n in [root_norm.clone(), -root_norm] {
            let u2 = (&self.x + &n) / &two;
            if u2.is_zero() {
                continue;
            }
            if let Some(u) = rational_sqrt(&u2) {
                let v = &self.y / (&two * &u);
                let cand = QuadElem { x: u, y: v, field: self.field };
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Both coordinates are integers, i.e. the element lies in ℤ[√m].
    pub fn is_integral_coords(&self) -> bool {
        self.x.denom().is_one() && self.y.denom().is_one()
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inverse().expect("negative power of zero") } else { self.clone() };
        let mut acc = QuadElem { x: Rational::one(), y: Rational::zero(), field: self.field };
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ArithError> {
        let field = self.field.join(rhs.field)?;
        Ok(QuadElem { x: &self.x + &rhs.x, y: &self.y + &rhs.y, field })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ArithError> {
        let field = self.field.join(rhs.field)?;
        let m = rat(field.radicand().unwrap_or(0));
        Ok(QuadElem { x: &self.x * &rhs.x + m * &self.y * &rhs.y, y: &self.x * &rhs.y + &self.y * &rhs.x, field })
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && (self.y.is_zero() || self.field == other.field)
    }
}

impl Eq for QuadElem {}

impl From<Rational> for QuadElem {
    fn from(q: Rational) -> Self {
        QuadElem::rational(q)
    }
}

impl From<i64> for QuadElem {
    fn from(n: i64) -> Self {
        QuadElem::int(n)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.field.radicand() {
            Some(m) if !self.y.is_zero() => m,
            _ => return f.write_str(&format_rational(&self.x)),
        };
        let coeff = |y: &Rational| -> String {
            if y.is_one() {
                String::new()
            } else if y.denom().is_one() {
                format_rational(y)
            } else {
                format!("({})", format_rational(y))
            }
        };
        if self.x.is_zero() {
            if self.y == -Rational::one() {
                return write!(f, "-√{m}");
            }
            return write!(f, "{}√{m}", coeff(&self.y));
        }
        let (op, y) = if self.y.is_negative() { ('-', -&self.y) } else { ('+', self.y.clone()) };
        write!(f, "{} {op} {}√{m}", format_rational(&self.x), coeff(&y))
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { x: -&self.x, y: -&self.y, field: self.field }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        self.checked_add(rhs).expect("incompatible quadratic fields")
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self + &(-rhs)
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.checked_mul(rhs).expect("incompatible quadratic fields")
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &QuadElem {
    type Output = QuadElem;
    fn div(self, rhs: &QuadElem) -> QuadElem {
        self * &rhs.inverse().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &QuadElem) -> QuadElem {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

/// Wire form: `"p/q"` for rationals, `{"x": "p/q", "y": "p/q"}` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarWire {
    Rational(String),
    Quadratic { x: String, y: String },
}

impl ScalarWire {
    pub fn from_elem(e: &QuadElem) -> Self {
        if e.y.is_zero() {
            ScalarWire::Rational(format_rational(&e.x))
        } else {
            ScalarWire::Quadratic { x: format_rational(&e.x), y: format_rational(&e.y) }
        }
    }

    pub fn to_elem(&self, field: Field) -> Result<QuadElem, ArithError> {
        use super::rational::parse_rational;
        match self {
            ScalarWire::Rational(s) => QuadElem::rational(parse_rational(s)?).in_field(field),
            ScalarWire::Quadratic { x, y } => QuadElem::new(parse_rational(x)?, parse_rational(y)?, field),
        }
    }
}

/// Parses a scalar given in text form: `"p/q"` or `"x,y"` meaning `x + y√m`.
pub fn parse_scalar(s: &str, field: Field) -> Result<QuadElem, ArithError> {
    use super::rational::parse_rational;
    match s.split_once(',') {
        Some((x, y)) => QuadElem::new(parse_rational(x)?, parse_rational(y)?, field),
        None => QuadElem::rational(parse_rational(s)?).in_field(field),
    }
}
