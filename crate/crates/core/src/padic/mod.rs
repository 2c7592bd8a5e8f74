//! Exact arithmetic in Q_p at fixed digit precision.
//!
//! Values are immutable; every operation returns a new number. Norms,
//! measures and fractional parts are exact rationals, characters are `f64`
//! complex numbers.

mod number;
mod prime;

pub use number::{format_rational, PadicNumber, PadicRationalInput};
pub use prime::{PrimeBase, MAX_PRIME};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("precision must be at least one digit")]
    InvalidPrecision,
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not a p-adic integer")]
    NotInteger,
    #[error("insufficient precision: need p^{needed}, value known to p^{available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

fn p_power(base: PrimeBase, m: i64) -> BigRational {
    let pm = number::pow_p(base, m.unsigned_abs());
    if m >= 0 {
        BigRational::from_integer(pm)
    } else {
        BigRational::new(BigInt::one(), pm)
    }
}

/// Haar measure of the ball `{|x|_p <= p^m}`, normalized so that Z_p has measure 1.
pub fn ball_measure(base: PrimeBase, m: i64) -> BigRational {
    p_power(base, m)
}

/// Haar measure of the sphere `{|x|_p = p^m}`: `p^m (1 - 1/p)`.
pub fn sphere_measure(base: PrimeBase, m: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(base.get()));
    p_power(base, m) * (BigRational::one() - p.recip())
}

/// First `depth` digits `a_0 … a_{depth-1}` of a p-adic integer: the address
/// of the nested cell containing `x` after `depth` p-fold subdivisions.
pub fn simplex_address(x: &PadicNumber, depth: usize) -> Result<Vec<u32>, PadicError> {
    if !x.is_integer() {
        return Err(PadicError::NotInteger);
    }
    (0..depth as i64)
        .map(|e| {
            x.digit_at(e).ok_or(PadicError::InsufficientPrecision {
                needed: depth as i64,
                available: x.absolute_precision(),
            })
        })
        .collect()
}

/// Measure of an addressed cell after `depth` subdivisions into `branching`
/// equal parts, `branching^(-depth)`. The branching need not be prime: the
/// triangle splits into four.
pub fn cell_measure(branching: u32, depth: usize) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(branching), depth))
}
