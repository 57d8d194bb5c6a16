//! Integer factorization, square classes and p-adic valuations of rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use super::ArithError;

const TRIAL_LIMIT: u32 = 1_000_000;

/// `sign * prod p^e`, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn product(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }
}

pub fn factorize(n: &BigInt) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut primes: Vec<BigInt> = Vec::new();

    let push_all = |rest: &mut BigInt, p: u32, primes: &mut Vec<BigInt>| {
        while (&*rest % p).is_zero() {
            *rest /= p;
            primes.push(BigInt::from(p));
        }
    };
    push_all(&mut rest, 2, &mut primes);
    let mut p: u32 = 3;
    while p <= TRIAL_LIMIT {
        if BigInt::from(p) * BigInt::from(p) > rest {
            break;
        }
        push_all(&mut rest, p, &mut primes);
        p += 2;
    }
    if !rest.is_one() {
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                primes.push(m);
                continue;
            }
            if let Some((root, k)) = perfect_power(&m) {
                stack.extend(std::iter::repeat_n(root, k as usize));
                continue;
            }
            let d = pollard_brent(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { sign, factors })
}

/// Miller-Rabin with the first twelve prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if *n == BigInt::from(b) {
            return true;
        }
        if (n % b).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &b in &BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    is_probable_prime(n)
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigInt::from(n))
}

// Largest k with m = r^k, k ≥ 2; rho is slow on prime powers.
fn perfect_power(m: &BigInt) -> Option<(BigInt, u32)> {
    let bits = m.bits() as u32;
    (2..=bits).rev().find_map(|k| {
        let r = m.nth_root(k);
        (r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == *m).then_some((r, k))
    })
}

// Brent's variant of Pollard rho; `n` must be odd and composite.
fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const M: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    q = (&q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += M;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

/// Writes `q = s * w^2` with `s` a squarefree integer carrying the sign of `q`.
pub fn squarefree_part(q: &Rational) -> Result<(BigInt, Rational), ArithError> {
    if q.is_zero() {
        return Err(ArithError::Zero);
    }
    let num = factorize(q.numer())?;
    let den = factorize(q.denom())?;
    let mut s = BigInt::from(num.sign * den.sign);
    for (p, e) in num.factors.iter().chain(den.factors.iter()) {
        if e % 2 == 1 {
            s *= p;
        }
    }
    // q / s is a positive rational square.
    let ratio = q / Rational::from_integer(s.clone());
    let w = super::rational::rational_sqrt(&ratio).expect("quotient by squarefree part is a square");
    Ok((s, w))
}

/// Squarefree kernel only.
pub fn square_class(q: &Rational) -> Result<BigInt, ArithError> {
    squarefree_part(q).map(|(s, _)| s)
}

pub fn padic_valuation(q: &Rational, p: &BigInt) -> Result<i64, ArithError> {
    if q.is_zero() {
        return Err(ArithError::Zero);
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p.clone()));
    }
    Ok(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

pub(crate) fn int_valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Primes dividing the numerator or denominator of any input, as `u64`.
pub fn support_primes<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Result<Vec<u64>, ArithError> {
    let mut out = Vec::new();
    for q in values {
        for part in [q.numer(), q.denom()] {
            for p in factorize(part)?.primes() {
                out.push(p.to_u64().ok_or(ArithError::Overflow)?);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}
