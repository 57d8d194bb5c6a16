//! Exact arithmetic: rationals, real quadratic fields, factorization and
//! square classes.

mod factor;
mod matrix;
mod quad;
mod radical;
mod rational;

use num_bigint::BigInt;
use thiserror::Error;

pub use factor::{
    factorize, is_prime, is_prime_u64, mod_pow_u64, padic_valuation, square_class, squarefree_part, support_primes,
    Factorization,
};
pub use matrix::{Entry, Matrix};
pub use quad::{parse_scalar, Embedding, Field, QuadElem, ScalarWire};
pub use radical::{RadicalElem, RadicalWire};
pub use rational::{
    format_rational, is_integer, is_perfect_square, parse_rational, rat, rat2, rational_sqrt, Rational,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("zero is not allowed here")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("cannot parse exact scalar {0:?}")]
    Parse(String),
    #[error("radicand {0} must be a squarefree integer >= 2")]
    InvalidField(i64),
    #[error("elements of Q(sqrt{0}) and Q(sqrt{1}) cannot be combined")]
    MixedFields(i64, i64),
    #[error("irrational coordinate in a rational context")]
    IrrationalInQ,
    #[error("integer does not fit in 64 bits")]
    Overflow,
}
