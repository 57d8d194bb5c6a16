use rayon::prelude::*;

use crate::arith::{is_perfect_square, Field, Matrix, QuadElem};
use crate::forms::DiagonalForm;

use super::block::{verify_block, TwistBlock};

/// Worker count: `TRACEFORGE_THREADS` when set to a positive integer,
/// otherwise the available hardware parallelism.
pub fn worker_count() -> usize {
    std::env::var("TRACEFORGE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// `|cᵢ| ≤ coeff_bound` for `q = ⟨c₁, c₂⟩`.
    pub coeff_bound: i64,
    /// `|entry| ≤ entry_bound` for the matrix.
    pub entry_bound: i64,
    /// Restrict to `c₁c₂ < 0`.
    pub mixed_signs_only: bool,
}

type Key = (i64, i64, i64, i64, i64, i64);

fn candidate_matrices(d: i64, e: i64) -> Vec<[i64; 4]> {
    let square = d >= 0 && is_perfect_square(&d.into()).is_some();
    let mut out = Vec::new();
    if square {
        for a in -e..=e {
            for b in -e..=e {
                for c in -e..=e {
                    for dd in -e..=e {
                        if a * a + b * c == d && a * b + b * dd == 0 && c * a + dd * c == 0 && c * b + dd * dd == d {
                            out.push([a, b, c, dd]);
                        }
                    }
                }
            }
        }
        return out;
    }
    // A² = d·I with d not a square forces tr A = 0 and det A = −d.
    for x in -e..=e {
        for y in -e..=e {
            if y == 0 {
                continue;
            }
            let r = d - x * x;
            if r % y == 0 && (r / y).abs() <= e {
                out.push([x, y, r / y, -x]);
            }
        }
    }
    out
}

fn similitude(c1: i64, c2: i64, m: &[i64; 4], d: i64) -> bool {
    let [a, b, c, dd] = *m;
    c1 * a * a + c2 * c * c == d * c1 && c1 * a * b + c2 * c * dd == 0 && c1 * b * b + c2 * dd * dd == d * c2
}

/// All blocks `(⟨c₁,c₂⟩, A, d)` with integer entries inside the bounds,
/// sorted by `(c₁, c₂, a₁₁, a₁₂, a₂₁, a₂₂)`.
pub fn search_blocks(d: i64, bounds: SearchBounds) -> Vec<TwistBlock> {
    let cb = bounds.coeff_bound.max(0);
    let mats = candidate_matrices(d, bounds.entry_bound.max(0));
    let coeffs: Vec<i64> = (-cb..=cb).filter(|&c| c != 0).collect();
    let scan = || -> Vec<Key> {
        coeffs
            .par_iter()
            .flat_map_iter(|&c1| {
                let mats = &mats;
                coeffs.iter().filter(move |&&c2| !bounds.mixed_signs_only || c1 * c2 < 0).flat_map(move |&c2| {
                    mats.iter().filter(move |m| similitude(c1, c2, m, d)).map(move |m| (c1, c2, m[0], m[1], m[2], m[3]))
                })
            })
            .collect()
    };
    let mut keys = match rayon::ThreadPoolBuilder::new().num_threads(worker_count()).build() {
        Ok(pool) => pool.install(scan),
        Err(_) => scan(),
    };
    keys.sort_unstable();
    keys.into_iter()
        .map(|(c1, c2, a, b, c, dd)| {
            let block = TwistBlock {
                q: DiagonalForm::from_ints(Field::Rationals, &[c1, c2]).expect("nonzero coefficients"),
                a: Matrix::from_ints(&[&[a, b], &[c, dd]]),
                d: QuadElem::int(d),
            };
            debug_assert!(verify_block(&block.q, &block.a, &block.d).map(|c| c.passed()).unwrap_or(false));
            block
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(c: i64, e: i64) -> SearchBounds {
        SearchBounds { coeff_bound: c, entry_bound: e, mixed_signs_only: false }
    }

    // Unpruned enumeration over every coefficient pair and matrix.
    fn oracle(d: i64, c: i64, e: i64) -> Vec<[i64; 6]> {
        let mut out = Vec::new();
        for c1 in (-c..=c).filter(|&x| x != 0) {
            for c2 in (-c..=c).filter(|&x| x != 0) {
                for a in -e..=e {
                    for b in -e..=e {
                        for x in -e..=e {
                            for y in -e..=e {
                                let sim = c1 * a * a + c2 * x * x == d * c1
                                    && c1 * a * b + c2 * x * y == 0
                                    && c1 * b * b + c2 * y * y == d * c2;
                                let sq = a * a + b * x == d
                                    && a * b + b * y == 0
                                    && x * a + y * x == 0
                                    && x * b + y * y == d;
                                if sim && sq {
                                    out.push([c1, c2, a, b, x, y]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn key(b: &TwistBlock) -> [i64; 6] {
        let v: Vec<i64> =
            b.q.entries().iter().chain(b.a.entries()).map(|e| e.x().to_integer().try_into().unwrap()).collect();
        v.try_into().unwrap()
    }

    #[test]
    fn contains_the_odd_family_blocks() {
        let found = search_blocks(3, bounds(3, 3));
        let has = |q: [i64; 2], m: [[i64; 2]; 2]| {
            found.iter().any(|b| {
                b.q == DiagonalForm::from_ints(Field::Rationals, &q).unwrap()
                    && b.a == Matrix::from_ints(&[&m[0], &m[1]])
            })
        };
        assert!(has([-1, 1], [[2, 1], [-1, -2]]));
        assert!(has([3, 1], [[0, 1], [3, 0]]));
    }

    #[test]
    fn matches_unpruned_oracle() {
        for d in [2i64, 3, 4, 5, 6] {
            let got: Vec<_> = search_blocks(d, bounds(3, 3)).iter().map(key).collect();
            assert_eq!(got, oracle(d, 3, 3), "d = {d}");
        }
    }

    #[test]
    fn square_d_only_yields_rational_roots() {
        for b in search_blocks(4, bounds(2, 2)) {
            assert!(b.d.is_square());
        }
    }

    #[test]
    fn mixed_sign_filter() {
        let all = search_blocks(3, bounds(3, 3));
        let mixed = search_blocks(3, SearchBounds { mixed_signs_only: true, ..bounds(3, 3) });
        assert!(mixed.len() < all.len());
        assert!(mixed.iter().all(|b| b.q.entries()[0].sign() != b.q.entries()[1].sign()));
    }
}
