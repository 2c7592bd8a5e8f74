use std::fmt;

use serde::{Deserialize, Serialize};

use super::PadicError;

/// Largest base accepted; trial division is only run below this bound.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

/// A prime `p` used as the base of a p-adic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeBase(u32);

impl PrimeBase {
    /// Checks primality by trial division. Bases must satisfy `2 <= p < 2^31`.
    pub fn new(p: u32) -> Result<Self, PadicError> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        Ok(PrimeBase(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<u32> for PrimeBase {
    type Error = PadicError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        PrimeBase::new(p)
    }
}

impl From<PrimeBase> for u32 {
    fn from(p: PrimeBase) -> u32 {
        p.0
    }
}

impl fmt::Display for PrimeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u32> = (0..50).filter(|&n| PrimeBase::new(n).is_ok()).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
    }

    #[test]
    fn rejects_composites_and_bounds() {
        assert!(PrimeBase::new(1).is_err());
        assert!(PrimeBase::new(91).is_err());
        assert!(PrimeBase::new(MAX_PRIME).is_ok()); // 2^31 - 1 is a Mersenne prime
        assert!(PrimeBase::new(u32::MAX).is_err());
    }
}
