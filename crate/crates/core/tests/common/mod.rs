//! Independent oracles shared by the integration suites. Everything here is
//! plain machine-integer arithmetic and does not call into the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime factorization of `|n|` by trial division.
pub fn factor(mut n: i64) -> BTreeMap<i64, u32> {
    n = n.abs();
    let mut out = BTreeMap::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

pub fn squarefree_part(n: i64) -> i64 {
    let s: i64 = factor(n).into_iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| p).product();
    n.signum() * s
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// `(a/p)` by Euler's criterion.
pub fn euler_legendre(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Whether `a x² + b y² + c z² = 0` has a nontrivial integer solution, for
/// squarefree pairwise coprime `a, b, c`. Searches the box guaranteed by
/// Holzer's theorem.
pub fn holzer_isotropic(a: i64, b: i64, c: i64) -> bool {
    if (a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0) {
        return false;
    }
    let bx = isqrt((b * c).abs());
    let by = isqrt((a * c).abs());
    for x in 0..=bx {
        for y in 0..=by {
            if x == 0 && y == 0 {
                continue;
            }
            let s = a * x * x + b * y * y;
            if s % c != 0 {
                continue;
            }
            let z2 = -s / c;
            if z2 >= 0 && isqrt(z2).pow(2) == z2 {
                return true;
            }
        }
    }
    false
}

/// Dimension over F₂ of the span of the square classes of `values` in
/// ℚ*/ℚ*², from parity vectors over the sign and the primes.
pub fn f2_rank(values: &[i64]) -> usize {
    let mut index: BTreeMap<i64, usize> = BTreeMap::new();
    let mut rows: Vec<u128> = Vec::new();
    for &v in values {
        let mut bits = 0u128;
        if v < 0 {
            bits |= 1;
        }
        for (p, e) in factor(v) {
            if e % 2 == 1 {
                let len = index.len();
                let i = *index.entry(p).or_insert(len + 1);
                bits |= 1 << i;
            }
        }
        rows.push(bits);
    }
    let mut rank = 0;
    for bit in 0..128 {
        let Some(pos) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else { continue };
        rows.swap(rank, pos);
        for r in 0..rows.len() {
            if r != rank && rows[r] >> bit & 1 == 1 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Residue-field oracle for a prime `π = x + y√2` of ℤ[√2]: decides whether
/// `δ = dx + dy√2` reduces to a nonzero square modulo `π`. A split prime has
/// prime norm `p` and residue map `√2 ↦ t` with `t² ≡ 2`, `x + y·t ≡ 0`; an
/// inert prime `p·unit` has residue field `F_p[X]/(X² − 2)`, where squares
/// are detected by raising to `(p² − 1)/2`.
pub fn residue_square_zsqrt2(x: i64, y: i64, dx: i64, dy: i64) -> Option<bool> {
    let n = (x * x - 2 * y * y).unsigned_abs();
    if is_prime(n) && n != 2 {
        let p = n as i64;
        let t = (0..p).find(|&t| (t * t - 2).rem_euclid(p) == 0 && (x + y * t).rem_euclid(p) == 0)?;
        let r = (dx + dy * t).rem_euclid(p) as u64;
        if r == 0 {
            return None;
        }
        return Some(pow_mod(r, (n - 1) / 2, n) == 1);
    }
    let p = isqrt(n as i64) as u64;
    if p * p != n || !is_prime(p) || p % 8 == 1 || p % 8 == 7 || x % p as i64 != 0 || y % p as i64 != 0 {
        return None;
    }
    let pi = p as i64;
    let (a, b) = (dx.rem_euclid(pi) as u64, dy.rem_euclid(pi) as u64);
    if a == 0 && b == 0 {
        return None;
    }
    let mul = |u: (u64, u64), v: (u64, u64)| ((u.0 * v.0 + 2 * u.1 * v.1) % p, (u.0 * v.1 + u.1 * v.0) % p);
    let (mut acc, mut base, mut e) = ((1, 0), (a, b), (p * p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    Some(acc == (1, 0))
}

/// Every `(c₁, c₂, a, b, c, d)` with `⟨c₁,c₂⟩∘A = D·⟨c₁,c₂⟩` and `A² = D·I`,
/// `A = [[a, b], [c, d]]`, by unpruned enumeration.
pub fn blocks_oracle(dd: i64, coeff: i64, entry: i64) -> Vec<[i64; 6]> {
    let e = entry;
    let mut out = Vec::new();
    for c1 in (-coeff..=coeff).filter(|&x| x != 0) {
        for c2 in (-coeff..=coeff).filter(|&x| x != 0) {
            for a in -e..=e {
                for b in -e..=e {
                    for c in -e..=e {
                        for d in -e..=e {
                            let sim = c1 * a * a + c2 * c * c == dd * c1
                                && c1 * a * b + c2 * c * d == 0
                                && c1 * b * b + c2 * d * d == dd * c2;
                            let sq = a * a + b * c == dd && b * (a + d) == 0 && c * (a + d) == 0 && c * b + d * d == dd;
                            if sim && sq {
                                out.push([c1, c2, a, b, c, d]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub type IntMatrix = Vec<Vec<i64>>;

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b[0].len();
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn diag(entries: &[i64]) -> IntMatrix {
    let n = entries.len();
    (0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect()
}

/// `Aᵀ·diag(q)·A = d·diag(q)` and `A² = d·I` over the integers.
pub fn block_identities(q: &[i64], a: &IntMatrix, d: i64) -> (bool, bool) {
    let qm = diag(q);
    let sim = mat_mul(&mat_mul(&transpose(a), &qm), a)
        == qm.iter().map(|r| r.iter().map(|x| x * d).collect()).collect::<IntMatrix>();
    let sq = mat_mul(a, a) == diag(&vec![d; q.len()]);
    (sim, sq)
}
