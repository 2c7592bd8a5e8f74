use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{PadicError, PrimeBase};

/// A rational number `numerator / denominator` used as input to the p-adic
/// expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicRationalInput {
    numerator: BigInt,
    denominator: BigInt,
}

impl PadicRationalInput {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self, PadicError> {
        let denominator = denominator.into();
        if denominator.is_zero() {
            return Err(PadicError::ZeroDenominator);
        }
        Ok(PadicRationalInput {
            numerator: numerator.into(),
            denominator,
        })
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        PadicRationalInput {
            numerator: n.into(),
            denominator: BigInt::one(),
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), self.denominator.clone())
    }
}

impl From<&BigRational> for PadicRationalInput {
    fn from(r: &BigRational) -> Self {
        PadicRationalInput {
            numerator: r.numer().clone(),
            denominator: r.denom().clone(),
        }
    }
}

impl FromStr for PadicRationalInput {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PadicError::Parse(format!("invalid rational {s:?}"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        PadicRationalInput::new(n, d)
    }
}

/// Renders an exact rational as `num/den`, always including the denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn pow_p(base: PrimeBase, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(base.get()), k as usize)
}

/// Splits `n = p^k * m` with `p ∤ m`. `n` must be nonzero.
fn split_p(n: &BigInt, base: PrimeBase) -> (i64, BigInt) {
    let p = BigInt::from(base.get());
    let mut m = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return (k, m);
        }
        m = q;
        k += 1;
    }
}

fn inverse_mod_u64(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// An element of Q_p known to a fixed absolute precision.
///
/// A nonzero value is `Σ digits[i] · p^(valuation + i)` modulo
/// `p^(valuation + digits.len())`, with `digits[0] != 0` so that the valuation
/// is exact. Zero is a distinct value that only carries the absolute precision
/// it is known to. Negative numbers use complement digits, e.g. `-1` is
/// `(p-1) + (p-1)p + (p-1)p² + …`.
///
/// Precision propagation:
/// * `x ± y` is known modulo `p^min(P(x), P(y))`;
/// * `x · y` is known modulo `p^min(v(x) + P(y), v(y) + P(x))`;
/// * division by an exact integer `p^t · u` lowers the absolute precision by `t`.
///
/// Here `P` is the absolute precision and `v` the valuation (for zero, `v = P`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    base: PrimeBase,
    valuation: i64,
    digits: Vec<u32>,
    precision: i64,
    is_zero: bool,
}

impl PadicNumber {
    /// Zero known modulo `p^absolute_precision`.
    pub fn zero(base: PrimeBase, absolute_precision: i64) -> Self {
        PadicNumber {
            base,
            valuation: absolute_precision,
            digits: Vec::new(),
            precision: absolute_precision,
            is_zero: true,
        }
    }

    /// Expands `q` with `precision` significant digits by digit-by-digit
    /// Hensel division.
    pub fn from_rational(q: &PadicRationalInput, base: PrimeBase, precision: usize) -> Result<Self, PadicError> {
        if precision == 0 {
            return Err(PadicError::InvalidPrecision);
        }
        if q.numerator.is_zero() {
            return Ok(PadicNumber::zero(base, precision as i64));
        }
        let p = base.get() as u64;
        let (num_ord, mut rest) = split_p(&q.numerator, base);
        let (den_ord, den) = split_p(&q.denominator, base);
        let den_inv = inverse_mod_u64(den.mod_floor(&BigInt::from(p)).to_u64().unwrap(), p);
        let pb = BigInt::from(p);

        let mut digits = Vec::with_capacity(precision);
        for _ in 0..precision {
            let r = rest.mod_floor(&pb).to_u64().unwrap();
            let a = ((r as u128 * den_inv as u128) % p as u128) as u32;
            digits.push(a);
            rest = (rest - &den * a) / &pb;
        }
        let valuation = num_ord - den_ord;
        Ok(PadicNumber {
            base,
            valuation,
            precision: valuation + precision as i64,
            digits,
            is_zero: false,
        })
    }

    pub fn from_integer(n: i64, base: PrimeBase, precision: usize) -> Result<Self, PadicError> {
        PadicNumber::from_rational(&PadicRationalInput::integer(n), base, precision)
    }

    /// Builds `Σ digits[i] p^(valuation+i)`, known modulo `p^(valuation + digits.len())`.
    /// Leading zero digits are absorbed into the valuation.
    pub fn from_digits(base: PrimeBase, valuation: i64, digits: &[u32]) -> Result<Self, PadicError> {
        if let Some(&d) = digits.iter().find(|&&d| d >= base.get()) {
            return Err(PadicError::DigitOutOfRange { digit: d, base: base.get() });
        }
        let precision = valuation + digits.len() as i64;
        match digits.iter().position(|&d| d != 0) {
            None => Ok(PadicNumber::zero(base, precision)),
            Some(k) => Ok(PadicNumber {
                base,
                valuation: valuation + k as i64,
                digits: digits[k..].to_vec(),
                precision,
                is_zero: false,
            }),
        }
    }

    /// `value · p^exponent` reduced modulo `p^precision`.
    pub(crate) fn from_scaled(base: PrimeBase, exponent: i64, value: &BigInt, precision: i64) -> Self {
        let width = precision - exponent;
        if width <= 0 {
            return PadicNumber::zero(base, precision);
        }
        let modulus = pow_p(base, width as u64);
        let v = value.mod_floor(&modulus);
        if v.is_zero() {
            return PadicNumber::zero(base, precision);
        }
        let (shift, unit) = split_p(&v, base);
        let n = (width - shift) as usize;
        let mut digits = Vec::with_capacity(n);
        let mut rest = unit.magnitude().clone();
        let p = base.get();
        for _ in 0..n {
            let (q, r) = rest.div_rem(&num_bigint::BigUint::from(p));
            digits.push(r.to_u32().unwrap());
            rest = q;
        }
        PadicNumber {
            base,
            valuation: exponent + shift,
            digits,
            precision,
            is_zero: false,
        }
    }

    /// `(exponent, value)` with `self = value · p^exponent`, `0 <= value < p^(P - exponent)`.
    pub(crate) fn to_scaled(&self) -> (i64, BigInt) {
        let p = BigInt::from(self.base.get());
        let value = self
            .digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &p + d);
        (self.valuation, value)
    }

    #[inline]
    pub fn base(&self) -> PrimeBase {
        self.base
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    /// The exact valuation `γ`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero).then_some(self.valuation)
    }

    /// Significant digits, lowest power first. Empty for zero.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Number of significant digits (relative precision).
    pub fn relative_precision(&self) -> usize {
        self.digits.len()
    }

    /// The value is known modulo `p^absolute_precision()`.
    pub fn absolute_precision(&self) -> i64 {
        self.precision
    }

    /// Digit at `p^exponent`, or `None` when beyond the known precision.
    pub fn digit_at(&self, exponent: i64) -> Option<u32> {
        if exponent >= self.precision {
            return None;
        }
        if self.is_zero || exponent < self.valuation {
            return Some(0);
        }
        Some(self.digits[(exponent - self.valuation) as usize])
    }

    pub fn is_integer(&self) -> bool {
        self.is_zero || self.valuation >= 0
    }

    /// `|x|_p = p^(-γ)`, and `|0|_p = 0`.
    pub fn norm(&self) -> BigRational {
        if self.is_zero {
            return BigRational::zero();
        }
        let pv = pow_p(self.base, self.valuation.unsigned_abs());
        if self.valuation >= 0 {
            BigRational::new(BigInt::one(), pv)
        } else {
            BigRational::from_integer(pv)
        }
    }

    pub fn norm_f64(&self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            self.base.as_f64().powi(-(self.valuation as i32))
        }
    }

    /// Ultrametric distance `|x - y|_p`.
    pub fn distance(&self, other: &PadicNumber) -> Result<BigRational, PadicError> {
        Ok(self.checked_sub(other)?.norm())
    }

    /// The fractional part `{x}_p = Σ_{i<0} a_i p^i` as an exact rational in `[0, 1)`.
    ///
    /// Exact whenever the absolute precision is at least 0; digits beyond the
    /// precision are taken as zero otherwise.
    pub fn frac_part(&self) -> BigRational {
        if self.is_zero || self.valuation >= 0 {
            return BigRational::zero();
        }
        let k = (-self.valuation) as usize;
        let p = BigInt::from(self.base.get());
        let low = self.digits[..k.min(self.digits.len())]
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &p + d);
        BigRational::new(low, pow_p(self.base, k as u64))
    }

    /// Additive character `χ_p(x) = exp(2πi {x}_p)`.
    pub fn character(&self) -> Complex64 {
        let frac = self.frac_part();
        if frac.is_zero() {
            return Complex64::new(1.0, 0.0);
        }
        let t = frac.to_f64().unwrap_or(0.0);
        Complex64::from_polar(1.0, std::f64::consts::TAU * t)
    }

    /// The truncated representative `Σ digits[i] p^(γ+i)` as an exact rational.
    pub fn truncated_rational(&self) -> BigRational {
        if self.is_zero {
            return BigRational::zero();
        }
        let (e, v) = self.to_scaled();
        let scale = pow_p(self.base, e.unsigned_abs());
        if e >= 0 {
            BigRational::from_integer(v * scale)
        } else {
            BigRational::new(v, scale)
        }
    }

    /// Residue of a p-adic integer modulo `p^k` in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<BigInt, PadicError> {
        if !self.is_integer() {
            return Err(PadicError::NotInteger);
        }
        if self.precision < k as i64 {
            return Err(PadicError::InsufficientPrecision {
                needed: k as i64,
                available: self.precision,
            });
        }
        let modulus = pow_p(self.base, k as u64);
        Ok(self.truncated_rational().to_integer().mod_floor(&modulus))
    }

    /// Lowers the absolute precision to `precision` (no-op if already lower).
    pub fn reduce_precision(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        let (e, v) = self.to_scaled();
        PadicNumber::from_scaled(self.base, e, &v, precision)
    }

    fn check_base(&self, other: &PadicNumber) -> Result<(), PadicError> {
        if self.base != other.base {
            return Err(PadicError::BaseMismatch(self.base.get(), other.base.get()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &PadicNumber) -> Result<Self, PadicError> {
        self.check_base(other)?;
        let precision = self.precision.min(other.precision);
        let exponent = self.valuation.min(other.valuation).min(precision);
        let mut value = BigInt::zero();
        for x in [self, other] {
            if x.is_zero || x.valuation >= precision {
                continue;
            }
            let (e, v) = x.to_scaled();
            value += v * pow_p(self.base, (e - exponent) as u64);
        }
        Ok(PadicNumber::from_scaled(self.base, exponent, &value, precision))
    }

    pub fn checked_sub(&self, other: &PadicNumber) -> Result<Self, PadicError> {
        self.checked_add(&other.neg_value())
    }

    pub fn checked_mul(&self, other: &PadicNumber) -> Result<Self, PadicError> {
        self.check_base(other)?;
        let precision = (self.valuation + other.precision).min(other.valuation + self.precision);
        if self.is_zero || other.is_zero {
            return Ok(PadicNumber::zero(self.base, precision));
        }
        let (e1, v1) = self.to_scaled();
        let (e2, v2) = other.to_scaled();
        Ok(PadicNumber::from_scaled(self.base, e1 + e2, &(v1 * v2), precision))
    }

    /// Additive inverse, i.e. the complement digits (`bar x`).
    pub fn neg_value(&self) -> Self {
        if self.is_zero {
            return self.clone();
        }
        let (e, v) = self.to_scaled();
        PadicNumber::from_scaled(self.base, e, &(-v), self.precision)
    }

    /// Division by an exact nonzero integer `k = p^t · u`.
    pub fn div_by_integer(&self, k: i64) -> Result<Self, PadicError> {
        if k == 0 {
            return Err(PadicError::DivisionByZero);
        }
        let (t, unit) = split_p(&BigInt::from(k), self.base);
        let precision = self.precision - t;
        if self.is_zero {
            return Ok(PadicNumber::zero(self.base, precision));
        }
        let (e, v) = self.to_scaled();
        let width = (self.precision - e) as u64;
        let modulus = pow_p(self.base, width);
        let inv = unit
            .mod_floor(&modulus)
            .modinv(&modulus)
            .expect("unit part is invertible modulo p^k");
        Ok(PadicNumber::from_scaled(self.base, e - t, &(v * inv), precision))
    }
}

impl Add for &PadicNumber {
    type Output = PadicNumber;

    /// Panics when the bases differ; use [`PadicNumber::checked_add`] otherwise.
    fn add(self, rhs: &PadicNumber) -> PadicNumber {
        self.checked_add(rhs).expect("p-adic operands must share a base")
    }
}

impl Sub for &PadicNumber {
    type Output = PadicNumber;

    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        self.checked_sub(rhs).expect("p-adic operands must share a base")
    }
}

impl Mul for &PadicNumber {
    type Output = PadicNumber;

    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        self.checked_mul(rhs).expect("p-adic operands must share a base")
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        self.neg_value()
    }
}

// Text form: `…a2 a1 a0 . a-1 … aγ (base p, val γ)`.
//
// Positions run from max(P-1, 0) down to min(γ, 0). Positions at or above the
// absolute precision P are printed as `?`. Zero prints `val inf`.
impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = (self.precision - 1).max(0);
        let bottom = if self.is_zero { 0.min(self.precision) } else { self.valuation.min(0) };
        let mut out = String::from("…");
        let mut first = true;
        for e in (bottom..=top).rev() {
            if !first {
                out.push(' ');
            }
            first = false;
            match self.digit_at(e) {
                Some(d) => out.push_str(&d.to_string()),
                None => out.push('?'),
            }
            if e == 0 {
                out.push_str(" .");
            }
        }
        if self.is_zero {
            write!(f, "{out} (base {}, val inf)", self.base)
        } else {
            write!(f, "{out} (base {}, val {})", self.base, self.valuation)
        }
    }
}

impl FromStr for PadicNumber {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| PadicError::Parse(format!("{m} in {s:?}"));
        let s = s.trim();
        let body = s
            .strip_prefix('…')
            .or_else(|| s.strip_prefix("..."))
            .ok_or_else(|| err("missing leading ellipsis"))?;
        let (digits_part, suffix) = body.split_once('(').ok_or_else(|| err("missing suffix"))?;
        let suffix = suffix.trim().strip_suffix(')').ok_or_else(|| err("unterminated suffix"))?;
        let mut base = None;
        let mut val: Option<Option<i64>> = None;
        for field in suffix.split(',') {
            let field = field.trim();
            if let Some(b) = field.strip_prefix("base") {
                let b: u32 = b.trim().parse().map_err(|_| err("bad base"))?;
                base = Some(PrimeBase::new(b)?);
            } else if let Some(v) = field.strip_prefix("val") {
                let v = v.trim();
                val = Some(if v == "inf" {
                    None
                } else {
                    Some(v.parse().map_err(|_| err("bad valuation"))?)
                });
            }
        }
        let base = base.ok_or_else(|| err("missing base"))?;
        let val = val.ok_or_else(|| err("missing valuation"))?;

        let tokens: Vec<&str> = digits_part.split_whitespace().collect();
        let point = tokens.iter().position(|&t| t == ".").ok_or_else(|| err("missing point"))?;
        if point == 0 {
            return Err(err("no integer digits"));
        }
        let top = point as i64 - 1;
        let bottom = -((tokens.len() - point - 1) as i64);
        let positions: Vec<&str> = tokens.iter().filter(|&&t| t != ".").copied().collect();
        // positions[0] is exponent `top`
        let mut precision = top + 1;
        let mut known = Vec::new();
        let mut seen_digit = false;
        for (i, t) in positions.iter().enumerate() {
            let e = top - i as i64;
            if *t == "?" {
                if seen_digit {
                    return Err(err("unknown digit below a known one"));
                }
                precision = e;
                continue;
            }
            seen_digit = true;
            let d: u32 = t.parse().map_err(|_| err("bad digit"))?;
            known.push(d);
        }
        known.reverse();
        let x = PadicNumber::from_digits(base, bottom, &known)?;
        debug_assert_eq!(x.precision, precision);
        if x.valuation() != val {
            return Err(err("valuation does not match digits"));
        }
        Ok(x)
    }
}
