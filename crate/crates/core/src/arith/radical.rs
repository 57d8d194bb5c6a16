//! Elements `u + v√g` of a quadratic extension k(√g) of the base field k.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::quad::{Field, QuadElem, ScalarWire};
use super::ArithError;

/// `u + v√g` with `u, v` in the base field. `g` is recorded only while `v`
/// is nonzero or once it has been fixed by an operand.
#[derive(Clone, Debug)]
pub struct RadicalElem {
    u: QuadElem,
    v: QuadElem,
    g: Option<QuadElem>,
}

impl RadicalElem {
    pub fn base(u: QuadElem) -> Self {
        RadicalElem { u, v: QuadElem::zero(), g: None }
    }

    pub fn new(u: QuadElem, v: QuadElem, g: QuadElem) -> Self {
        RadicalElem { u, v, g: Some(g) }
    }

    /// `√g` itself.
    pub fn sqrt_of(g: QuadElem) -> Self {
        RadicalElem { u: QuadElem::zero(), v: QuadElem::one(), g: Some(g) }
    }

    pub fn u(&self) -> &QuadElem {
        &self.u
    }

    pub fn v(&self) -> &QuadElem {
        &self.v
    }

    pub fn generator(&self) -> Option<&QuadElem> {
        self.g.as_ref()
    }

    pub fn in_base(&self) -> Option<&QuadElem> {
        self.v.is_zero().then_some(&self.u)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// σ: `√g ↦ −√g`, fixing the base field.
    pub fn conjugate(&self) -> Self {
        RadicalElem { u: self.u.clone(), v: -&self.v, g: self.g.clone() }
    }

    fn join_g(&self, other: &Self) -> Option<QuadElem> {
        match (&self.g, &other.g) {
            (Some(a), Some(b)) => {
                assert!(a == b, "incompatible radical extensions");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        RadicalElem { u: &self.u + &rhs.u, v: &self.v + &rhs.v, g: self.join_g(rhs) }
    }

    pub fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    pub fn negated(&self) -> Self {
        RadicalElem { u: -&self.u, v: -&self.v, g: self.g.clone() }
    }

    pub fn times(&self, rhs: &Self) -> Self {
        let g = self.join_g(rhs);
        let vv = &self.v * &rhs.v;
        let u = match &g {
            Some(g) => &(&self.u * &rhs.u) + &(&vv * g),
            None => &self.u * &rhs.u,
        };
        let v = &(&self.u * &rhs.v) + &(&self.v * &rhs.u);
        RadicalElem { u, v, g }
    }

    /// `u² − g v²`, an element of the base field.
    pub fn norm(&self) -> QuadElem {
        match &self.g {
            Some(g) => &(&self.u * &self.u) - &(&(&self.v * &self.v) * g),
            None => &self.u * &self.u,
        }
    }

    /// Requires `g` to be a non-square of the base field for nonzero inputs.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        let inv = n.inverse()?;
        Some(RadicalElem { u: &self.u * &inv, v: -&(&self.v * &inv), g: self.g.clone() })
    }

    pub fn scale(&self, c: &QuadElem) -> Self {
        RadicalElem { u: &self.u * c, v: &self.v * c, g: self.g.clone() }
    }
}

impl PartialEq for RadicalElem {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v
    }
}

impl Eq for RadicalElem {}

impl From<QuadElem> for RadicalElem {
    fn from(u: QuadElem) -> Self {
        RadicalElem::base(u)
    }
}

impl fmt::Display for RadicalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.g, self.v.is_zero()) {
            (_, true) | (None, _) => write!(f, "{}", self.u),
            (Some(g), false) => write!(f, "({}) + ({})·√({})", self.u, self.v, g),
        }
    }
}

/// Wire form of an entry of k(√g): a plain scalar, or `{"u": .., "v": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadicalWire {
    Base(ScalarWire),
    Pair { u: ScalarWire, v: ScalarWire },
}

impl RadicalWire {
    pub fn from_elem(e: &RadicalElem) -> Self {
        if e.v.is_zero() {
            RadicalWire::Base(ScalarWire::from_elem(&e.u))
        } else {
            RadicalWire::Pair { u: ScalarWire::from_elem(&e.u), v: ScalarWire::from_elem(&e.v) }
        }
    }

    pub fn to_elem(&self, field: Field, g: &QuadElem) -> Result<RadicalElem, ArithError> {
        Ok(match self {
            RadicalWire::Base(s) => RadicalElem { u: s.to_elem(field)?, v: QuadElem::zero(), g: Some(g.clone()) },
            RadicalWire::Pair { u, v } => RadicalElem::new(u.to_elem(field)?, v.to_elem(field)?, g.clone()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_q_sqrt3() {
        let g = QuadElem::int(3);
        let a = RadicalElem::new(QuadElem::int(1), QuadElem::int(2), g.clone());
        let b = a.inverse().unwrap();
        let one = a.times(&b);
        assert_eq!(one, RadicalElem::base(QuadElem::one()));
        let s = RadicalElem::sqrt_of(g);
        assert_eq!(s.times(&s), RadicalElem::base(QuadElem::int(3)));
        assert_eq!(s.conjugate().times(&s), RadicalElem::base(QuadElem::int(-3)));
    }

    #[test]
    fn tower_over_q_sqrt2() {
        // √(2 + √2) squared is 2 + √2.
        let k = Field::RealQuadratic(2);
        let b = QuadElem::from_ints(2, 1, k).unwrap();
        let s = RadicalElem::sqrt_of(b.clone());
        assert_eq!(s.times(&s), RadicalElem::base(b));
    }
}
