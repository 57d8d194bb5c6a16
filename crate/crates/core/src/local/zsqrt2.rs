//! Primes of ℤ[√2] and their splitting in k(√±√2), k = ℚ(√2).
//!
//! Places of ℚ(√2) are not modelled in general. A prime element `π` is
//! tested for splitting in k(√δ) by asking whether `δ` is a square in the
//! residue field ℤ[√2]/(π).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{is_prime_u64, mod_pow_u64, rat, Field, QuadElem, Rational};

use super::hilbert::legendre_unchecked;
use super::LocalError;

pub fn q_sqrt2() -> Field {
    Field::RealQuadratic(2)
}

/// Fundamental unit `1 + √2`.
pub fn fundamental_unit() -> QuadElem {
    QuadElem::from_ints(1, 1, q_sqrt2()).expect("valid element")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime element of ℤ[√2] lying over the rational prime `p`.
///
/// `residue` is the image of √2 in ℤ[√2]/(π) ≅ 𝔽_p when that quotient is a
/// prime field (split and ramified primes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPrime {
    pub pi: QuadElem,
    pub p: u64,
    pub splitting: Splitting,
    pub residue: Option<u64>,
}

/// Which quadratic extension k(√δ) is being tested: δ = −√2 or δ = +√2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    MinusSqrt2,
    PlusSqrt2,
}

impl Branch {
    /// `n ≡ 0 (mod 4)` uses −√2, `n ≡ 2 (mod 4)` uses +√2.
    pub fn for_dimension(n: usize) -> Option<Branch> {
        match n % 4 {
            0 => Some(Branch::MinusSqrt2),
            2 => Some(Branch::PlusSqrt2),
            _ => None,
        }
    }

    pub fn delta(self) -> QuadElem {
        let s = QuadElem::sqrt_radicand(q_sqrt2()).expect("valid element");
        match self {
            Branch::MinusSqrt2 => -s,
            Branch::PlusSqrt2 => s,
        }
    }
}

fn splitting_of(p: u64) -> Splitting {
    match p % 8 {
        _ if p == 2 => Splitting::Ramified,
        1 | 7 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

/// Square root of `n` modulo an odd prime (Tonelli–Shanks).
pub fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if mod_pow_u64(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| mod_pow_u64(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = mod_pow_u64(z, q, p);
    let mut t = mod_pow_u64(n, q, p);
    let mut r = mod_pow_u64(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
        }
        let b = mod_pow_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

fn residue_of(x: &Rational, y: &Rational, t: u64, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let v = x.numer() + y.numer() * BigInt::from(t);
    let r = ((v % &pb) + &pb) % &pb;
    r.to_u64().expect("residue fits")
}

// x + y√2 with x^2 - 2y^2 = ±p, found by increasing |y|.
fn norm_p_element(p: u64) -> Option<(i64, i64)> {
    let p = p as i128;
    for y in 0..=(p as i64) {
        let yy = 2 * (y as i128) * (y as i128);
        for target in [yy + p, yy - p] {
            if target < 0 {
                continue;
            }
            let x = (target as f64).sqrt() as i128;
            for cand in [x - 1, x, x + 1] {
                if cand >= 0 && cand * cand == target {
                    return Some((cand as i64, y));
                }
            }
        }
    }
    None
}

/// All primes of ℤ[√2] above `p`, split primes ordered by residue of √2.
pub fn classify_prime_zsqrt2(p: u64) -> Result<Vec<QuadPrime>, LocalError> {
    if !is_prime_u64(p) {
        return Err(LocalError::NotPrime(p));
    }
    let k = q_sqrt2();
    match splitting_of(p) {
        Splitting::Ramified => {
            Ok(vec![QuadPrime { pi: QuadElem::sqrt_radicand(k)?, p, splitting: Splitting::Ramified, residue: Some(0) }])
        }
        Splitting::Inert => Ok(vec![QuadPrime {
            pi: QuadElem::int(p as i64).in_field(k)?,
            p,
            splitting: Splitting::Inert,
            residue: None,
        }]),
        Splitting::Split => {
            let t0 = sqrt_mod(2, p).expect("2 is a square mod split primes");
            let (x, y) = norm_p_element(p).ok_or(LocalError::SearchExhausted(p))?;
            let mut ts = [t0.min(p - t0), t0.max(p - t0)];
            ts.sort_unstable();
            let mut out = Vec::new();
            for t in ts {
                let pi = if residue_of(&rat(x), &rat(y), t, p) == 0 {
                    QuadElem::from_ints(x, y, k)?
                } else {
                    QuadElem::from_ints(x, -y, k)?
                };
                debug_assert_eq!(residue_of(pi.x(), pi.y(), t, p), 0);
                out.push(QuadPrime { pi, p, splitting: Splitting::Split, residue: Some(t) });
            }
            Ok(out)
        }
    }
}

impl QuadPrime {
    /// Recovers the prime ideal generated by an element of ℤ[√2].
    pub fn from_generator(a: &QuadElem) -> Result<QuadPrime, LocalError> {
        let a = a.in_field(q_sqrt2()).map_err(|_| LocalError::NotInZSqrt2)?;
        if !a.is_integral_coords() {
            return Err(LocalError::NotInZSqrt2);
        }
        let n = a.norm().numer().abs();
        let not_prime = || LocalError::NotPrimeElement(a.to_string());
        let n64 = n.to_u64().ok_or_else(not_prime)?;
        if is_prime_u64(n64) {
            let p = n64;
            return match splitting_of(p) {
                Splitting::Ramified => Ok(QuadPrime { pi: a, p, splitting: Splitting::Ramified, residue: Some(0) }),
                Splitting::Split => {
                    let t = [sqrt_mod(2, p).expect("split prime"), 0]
                        .into_iter()
                        .flat_map(|t| [t, p - t])
                        .find(|&t| t != 0 && t != p && residue_of(a.x(), a.y(), t, p) == 0)
                        .ok_or_else(not_prime)?;
                    Ok(QuadPrime { pi: a, p, splitting: Splitting::Split, residue: Some(t) })
                }
                Splitting::Inert => Err(not_prime()),
            };
        }
        // Inert primes have norm p^2 and generator p times a unit.
        let root = num_integer::Roots::sqrt(&n);
        let p = root.to_u64().ok_or_else(not_prime)?;
        if &root * &root == n && is_prime_u64(p) && splitting_of(p) == Splitting::Inert {
            let pr = rat(p as i64);
            let unit = QuadElem::new(a.x() / &pr, a.y() / &pr, q_sqrt2())?;
            if unit.is_integral_coords() && unit.norm().abs().is_one() {
                return Ok(QuadPrime { pi: a, p, splitting: Splitting::Inert, residue: None });
            }
        }
        Err(not_prime())
    }

    /// Absolute norm of the prime ideal.
    pub fn ideal_norm(&self) -> u64 {
        match self.splitting {
            Splitting::Inert => self.p * self.p,
            _ => self.p,
        }
    }
}

// (a + bX)(c + dX) mod (X^2 - 2, p)
fn fp2_mul(u: (u64, u64), v: (u64, u64), p: u64) -> (u64, u64) {
    let m = |a: u64, b: u64| (a as u128 * b as u128 % p as u128) as u64;
    let re = (m(u.0, v.0) + m(2, m(u.1, v.1))) % p;
    let im = (m(u.0, v.1) + m(u.1, v.0)) % p;
    (re, im)
}

fn fp2_pow(mut b: (u64, u64), mut e: u128, p: u64) -> (u64, u64) {
    let mut acc = (1 % p, 0);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp2_mul(acc, b, p);
        }
        b = fp2_mul(b, b, p);
        e >>= 1;
    }
    acc
}

fn reduce_mod(q: &Rational, p: u64) -> Result<u64, LocalError> {
    let pb = BigInt::from(p);
    let den = q.denom() % &pb;
    if den.is_zero() {
        return Err(LocalError::NotInZSqrt2);
    }
    let den_inv = mod_pow_u64(den.to_u64().expect("fits"), p - 2, p);
    let num = ((q.numer() % &pb) + &pb) % &pb;
    Ok((num.to_u64().expect("fits") as u128 * den_inv as u128 % p as u128) as u64)
}

/// Whether `delta` reduces to a nonzero square in the residue field of `pi`,
/// i.e. whether `pi` splits in k(√delta).
pub fn splits_in_sqrt_ext(pi: &QuadPrime, delta: &QuadElem) -> Result<bool, LocalError> {
    let p = pi.p;
    if pi.splitting == Splitting::Ramified || p == 2 {
        return Err(LocalError::ResidueCharTwo);
    }
    let delta = delta.in_field(q_sqrt2()).map_err(|_| LocalError::NotInZSqrt2)?;
    let x = reduce_mod(delta.x(), p)?;
    let y = reduce_mod(delta.y(), p)?;
    match pi.splitting {
        Splitting::Split => {
            let t = pi.residue.expect("split primes carry a residue map");
            let r = (x as u128 + y as u128 * t as u128) % p as u128;
            if r == 0 {
                return Err(LocalError::DeltaInPrime);
            }
            Ok(legendre_unchecked(&BigInt::from(r as u64), p) == 1)
        }
        Splitting::Inert => {
            if x == 0 && y == 0 {
                return Err(LocalError::DeltaInPrime);
            }
            let e = ((p as u128) * (p as u128) - 1) / 2;
            Ok(fp2_pow((x, y), e, p) == (1, 0))
        }
        Splitting::Ramified => unreachable!(),
    }
}

/// A splitting prime paired with a totally positive generator
/// `sign · π · (1+√2)^unit_exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPrime {
    pub prime: QuadPrime,
    pub generator: QuadElem,
    pub unit_exponent: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPrimeSearch {
    pub primes: Vec<SplitPrime>,
    /// Fewer than the requested number were found below the norm bound.
    pub truncated: bool,
    /// Primes that split but had no totally positive generator within the
    /// unit-exponent window.
    pub window_failures: Vec<QuadPrime>,
}

pub const UNIT_WINDOW: i32 = 8;

/// Searches `±π·(1+√2)^k`, `|k| ≤ 8`, for a totally positive generator.
pub fn totally_positive_generator(pi: &QuadElem) -> Option<(QuadElem, i32)> {
    let eps = fundamental_unit();
    let mut exps: Vec<i32> = (-UNIT_WINDOW..=UNIT_WINDOW).collect();
    exps.sort_by_key(|k| (k.abs(), *k < 0));
    for k in exps {
        let g = pi * &eps.pow(k);
        for cand in [g.clone(), -&g] {
            if cand.is_totally_positive() {
                return Some((cand, k));
            }
        }
    }
    None
}

/// The first `count` primes of ℤ[√2] (ordered by rational prime, then by
/// residue map) with ideal norm at most `norm_bound` that split in
/// k(√delta).
pub fn find_split_primes(delta: &QuadElem, count: usize, norm_bound: u64) -> Result<SplitPrimeSearch, LocalError> {
    let mut out = SplitPrimeSearch { primes: Vec::new(), truncated: false, window_failures: Vec::new() };
    if count == 0 {
        return Ok(out);
    }
    let mut p = 3u64;
    while p <= norm_bound && out.primes.len() < count {
        if is_prime_u64(p) {
            for prime in classify_prime_zsqrt2(p)? {
                if prime.ideal_norm() > norm_bound || out.primes.len() >= count {
                    continue;
                }
                match splits_in_sqrt_ext(&prime, delta) {
                    Ok(true) => {}
                    Ok(false) | Err(LocalError::DeltaInPrime) => continue,
                    Err(e) => return Err(e),
                }
                match totally_positive_generator(&prime.pi) {
                    Some((generator, unit_exponent)) => out.primes.push(SplitPrime { prime, generator, unit_exponent }),
                    None => out.window_failures.push(prime),
                }
            }
        }
        p += 2;
    }
    out.truncated = out.primes.len() < count;
    Ok(out)
}
