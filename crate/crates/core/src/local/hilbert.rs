//! Quadratic residue symbols and Hilbert symbols over ℚ.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{is_prime_u64, mod_pow_u64, Rational};

use super::LocalError;

/// A place of ℚ: the real place or a finite prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self, LocalError> {
        if !is_prime_u64(p) {
            return Err(LocalError::NotPrime(p));
        }
        Ok(Place::Finite(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = LocalError;
    fn from_str(s: &str) -> Result<Self, LocalError> {
        if s == "inf" {
            return Ok(Place::Real);
        }
        let p: u64 = s.parse().map_err(|_| LocalError::BadPlace(s.to_string()))?;
        Place::finite(p)
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8, LocalError> {
    if p == 2 {
        return Err(LocalError::EvenPrime);
    }
    if !is_prime_u64(p) {
        return Err(LocalError::NotPrime(p));
    }
    Ok(legendre_unchecked(a, p))
}

pub(crate) fn legendre_unchecked(a: &BigInt, p: u64) -> i8 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
    match mod_pow_u64(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    (v, n)
}

// An integer in the same square class: num/den ~ num*den.
fn integral_rep(q: &Rational) -> BigInt {
    q.numer() * q.denom()
}

fn mod8(n: &BigInt) -> u8 {
    n.mod_floor(&BigInt::from(8)).to_u8().expect("residue fits")
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: Place) -> Result<i8, LocalError> {
    if a.is_zero() || b.is_zero() {
        return Err(LocalError::Zero);
    }
    let a = integral_rep(a);
    let b = integral_rep(b);
    match v {
        Place::Real => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => {
            if !is_prime_u64(p) {
                return Err(LocalError::NotPrime(p));
            }
            let (alpha, u) = split_valuation(&a, p);
            let (beta, w) = split_valuation(&b, p);
            if p == 2 {
                let eps = |x: u8| ((x - 1) / 2) % 2;
                let omega = |x: u8| (((x as u32 * x as u32) - 1) / 8) % 2;
                let (u8_, w8) = (mod8(&u), mod8(&w));
                let e = eps(u8_) as u32 * eps(w8) as u32 + alpha * omega(w8) + beta * omega(u8_);
                Ok(if e.is_multiple_of(2) { 1 } else { -1 })
            } else {
                let mut s: i8 = if (alpha * beta) % 2 == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
                if beta % 2 == 1 {
                    s *= legendre_unchecked(&u, p);
                }
                if alpha % 2 == 1 {
                    s *= legendre_unchecked(&w, p);
                }
                Ok(s)
            }
        }
    }
}
