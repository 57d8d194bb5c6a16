//! Local invariants: Hilbert symbols and Hasse invariants over ℚ, and the
//! residue-field splitting test for primes of ℤ[√2].

mod hasse;
mod hilbert;
mod zsqrt2;

use thiserror::Error;

use crate::arith::ArithError;

pub use hasse::{hasse_invariant, hasse_profile, relevant_places, scaled_hasse_formula, HasseProfile};
pub use hilbert::{hilbert_symbol, legendre, Place};
pub use zsqrt2::{
    classify_prime_zsqrt2, find_split_primes, fundamental_unit, q_sqrt2, splits_in_sqrt_ext, sqrt_mod,
    totally_positive_generator, Branch, QuadPrime, SplitPrime, SplitPrimeSearch, Splitting, UNIT_WINDOW,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("Hilbert symbols are undefined for zero arguments")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid place {0:?}; expected \"inf\" or a prime")]
    BadPlace(String),
    #[error("the Legendre symbol needs an odd prime")]
    EvenPrime,
    #[error("form has irrational entries; local invariants are computed over Q only")]
    NotOverQ,
    #[error("closed-form Hasse invariant needs at least 2 variables, got {0}")]
    RankTooSmall(usize),
    #[error("residue characteristic 2 is not a candidate")]
    ResidueCharTwo,
    #[error("element is not in Z[sqrt2]")]
    NotInZSqrt2,
    #[error("{0} does not generate a prime ideal of Z[sqrt2]")]
    NotPrimeElement(String),
    #[error("delta lies in the prime ideal")]
    DeltaInPrime,
    #[error("no element of norm +-{0} found")]
    SearchExhausted(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
