use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::padic::{PadicNumber, PadicRationalInput, PrimeBase};

/// Upper bound on the number of cosets a single function may carry.
pub const MAX_COSETS: usize = 1 << 22;

/// A locally constant, compactly supported function `Q_p → C`.
///
/// The function vanishes outside `{|x|_p <= p^K}` and is constant on every
/// coset `b + p^J Z_p`. There are `p^(K+J)` such cosets inside the support;
/// coset `B` (an index in `0..p^(K+J)`) has the representative
/// `b = B · p^(-K)`, so the base-p digits of `B`, lowest first, are the digits
/// of `b` at exponents `-K, …, J-1`.
///
/// Values are stored densely; the JSON form lists nonzero cosets only.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    base: PrimeBase,
    support: i32,
    resolution: i32,
    values: Vec<Complex64>,
}

pub(crate) fn coset_count(base: PrimeBase, support: i32, resolution: i32) -> Result<usize, AnalysisError> {
    if resolution < -support {
        return Err(AnalysisError::InvalidWindow { support, resolution });
    }
    let n = (support + resolution) as u32;
    (base.get() as usize)
        .checked_pow(n)
        .filter(|&c| c <= MAX_COSETS)
        .ok_or(AnalysisError::TooLarge { base: base.get(), exponent: n })
}

impl TestFunction {
    pub fn zeros(base: PrimeBase, support: i32, resolution: i32) -> Result<Self, AnalysisError> {
        let n = coset_count(base, support, resolution)?;
        Ok(TestFunction {
            base,
            support,
            resolution,
            values: vec![Complex64::new(0.0, 0.0); n],
        })
    }

    pub fn from_values(
        base: PrimeBase,
        support: i32,
        resolution: i32,
        values: Vec<Complex64>,
    ) -> Result<Self, AnalysisError> {
        let n = coset_count(base, support, resolution)?;
        if values.len() != n {
            return Err(AnalysisError::ShapeMismatch(format!(
                "expected {n} coset values, got {}",
                values.len()
            )));
        }
        Ok(TestFunction {
            base,
            support,
            resolution,
            values,
        })
    }

    /// Builds the function from its value on each coset, given the coset's
    /// digits at exponents `-K..J` (lowest first).
    pub fn from_fn(
        base: PrimeBase,
        support: i32,
        resolution: i32,
        mut f: impl FnMut(&[u32]) -> Complex64,
    ) -> Result<Self, AnalysisError> {
        let mut out = TestFunction::zeros(base, support, resolution)?;
        let mut digits = vec![0u32; (support + resolution) as usize];
        for i in 0..out.values.len() {
            out.fill_digits(i, &mut digits);
            out.values[i] = f(&digits);
        }
        Ok(out)
    }

    /// Indicator of the ball `{|x|_p <= p^m}` sampled on the `(K, J)` window.
    pub fn indicator_ball(base: PrimeBase, m: i32, support: i32, resolution: i32) -> Result<Self, AnalysisError> {
        if m > support || m < -resolution {
            return Err(AnalysisError::ShapeMismatch(format!(
                "ball of radius p^{m} is not a union of cosets in window K={support}, J={resolution}"
            )));
        }
        // |x| <= p^m  <=>  digits below exponent -m vanish
        let low = (support - m) as usize;
        TestFunction::from_fn(base, support, resolution, |d| {
            let inside = d[..low].iter().all(|&c| c == 0);
            Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
        })
    }

    #[inline]
    pub fn base(&self) -> PrimeBase {
        self.base
    }

    /// `K`: the function vanishes outside `{|x|_p <= p^K}`.
    #[inline]
    pub fn support_exponent(&self) -> i32 {
        self.support
    }

    /// `J`: the function is constant on cosets of `p^J Z_p`.
    #[inline]
    pub fn resolution_exponent(&self) -> i32 {
        self.resolution
    }

    pub fn coset_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Haar measure of a single coset, `p^(-J)`.
    pub fn cell_measure(&self) -> f64 {
        self.base.as_f64().powi(-self.resolution)
    }

    pub(crate) fn fill_digits(&self, mut index: usize, digits: &mut [u32]) {
        let p = self.base.get() as usize;
        for d in digits.iter_mut() {
            *d = (index % p) as u32;
            index /= p;
        }
    }

    pub fn coset_digits(&self, index: usize) -> Vec<u32> {
        let mut digits = vec![0; (self.support + self.resolution) as usize];
        self.fill_digits(index, &mut digits);
        digits
    }

    /// The representative `B · p^(-K)` of coset `index`, as an exact rational.
    pub fn representative(&self, index: usize) -> BigRational {
        let pk = num_traits::pow(BigInt::from(self.base.get()), self.support.unsigned_abs() as usize);
        if self.support >= 0 {
            BigRational::new(BigInt::from(index), pk)
        } else {
            BigRational::from_integer(BigInt::from(index) * pk)
        }
    }

    /// The coset representative as a p-adic number with `digits` significant digits.
    pub fn representative_padic(&self, index: usize, digits: usize) -> PadicNumber {
        let r = self.representative(index);
        PadicNumber::from_rational(&PadicRationalInput::from(&r), self.base, digits.max(1))
            .expect("nonzero denominator")
    }

    /// Coset index containing `x`, or `None` when `x` lies outside the support.
    pub fn index_of(&self, x: &PadicNumber) -> Result<Option<usize>, AnalysisError> {
        if x.base() != self.base {
            return Err(AnalysisError::Padic(crate::padic::PadicError::BaseMismatch(
                x.base().get(),
                self.base.get(),
            )));
        }
        if let Some(v) = x.valuation() {
            if v < -(self.support as i64) {
                return Ok(None);
            }
        }
        let p = self.base.get() as usize;
        let mut index = 0usize;
        for e in (-(self.support as i64)..self.resolution as i64).rev() {
            let d = x.digit_at(e).ok_or(AnalysisError::Padic(
                crate::padic::PadicError::InsufficientPrecision {
                    needed: self.resolution as i64,
                    available: x.absolute_precision(),
                },
            ))?;
            index = index * p + d as usize;
        }
        Ok(Some(index))
    }

    pub fn evaluate(&self, x: &PadicNumber) -> Result<Complex64, AnalysisError> {
        Ok(self
            .index_of(x)?
            .map_or(Complex64::new(0.0, 0.0), |i| self.values[i]))
    }

    /// Resamples onto a larger window `K' >= K`, `J' >= J`. Exact.
    pub fn refine(&self, support: i32, resolution: i32) -> Result<Self, AnalysisError> {
        if support < self.support || resolution < self.resolution {
            return Err(AnalysisError::ShapeMismatch(format!(
                "cannot refine window (K={}, J={}) to (K={support}, J={resolution})",
                self.support, self.resolution
            )));
        }
        if support == self.support && resolution == self.resolution {
            return Ok(self.clone());
        }
        let p = self.base.get() as usize;
        let low = p.pow((support - self.support) as u32);
        let n_old = self.values.len();
        let mut out = TestFunction::zeros(self.base, support, resolution)?;
        for (i, v) in out.values.iter_mut().enumerate() {
            if i % low == 0 {
                *v = self.values[(i / low) % n_old];
            }
        }
        Ok(out)
    }

    pub fn same_window(&self, other: &TestFunction) -> bool {
        self.base == other.base && self.support == other.support && self.resolution == other.resolution
    }

    fn check_window(&self, other: &TestFunction) -> Result<(), AnalysisError> {
        if !self.same_window(other) {
            return Err(AnalysisError::ShapeMismatch(format!(
                "windows differ: (p={}, K={}, J={}) vs (p={}, K={}, J={})",
                self.base, self.support, self.resolution, other.base, other.support, other.resolution
            )));
        }
        Ok(())
    }

    /// `∫ f dx = Σ_b f(b) p^(-J)`, exact for locally constant functions.
    pub fn integrate(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.cell_measure()
    }

    /// `⟨f, g⟩ = ∫ conj(f) g dx`.
    pub fn inner(&self, other: &TestFunction) -> Result<Complex64, AnalysisError> {
        self.check_window(other)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.cell_measure())
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_measure()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TestFunction {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// `a·f + b·g` on a common window.
    pub fn lin_comb(a: Complex64, f: &TestFunction, b: Complex64, g: &TestFunction) -> Result<Self, AnalysisError> {
        f.check_window(g)?;
        Ok(TestFunction {
            values: f.values.iter().zip(&g.values).map(|(x, y)| a * x + b * y).collect(),
            ..f.clone()
        })
    }

    pub fn max_abs_diff(&self, other: &TestFunction) -> Result<f64, AnalysisError> {
        self.check_window(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TestFunctionFile::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, AnalysisError> {
        let file: TestFunctionFile = serde_json::from_str(s).map_err(|e| AnalysisError::Json(e.to_string()))?;
        file.try_into()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    digits: String,
    re: f64,
    im: f64,
}

/// JSON layout `{p, K, J, entries: [{digits, re, im}]}`. `digits` lists the
/// representative's digits at exponents `J-1` down to `-K`, space separated.
#[derive(Debug, Serialize, Deserialize)]
struct TestFunctionFile {
    p: u32,
    #[serde(rename = "K")]
    support: i32,
    #[serde(rename = "J")]
    resolution: i32,
    entries: Vec<Entry>,
}

impl From<&TestFunction> for TestFunctionFile {
    fn from(f: &TestFunction) -> Self {
        let entries = f
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(i, v)| {
                let digits = f
                    .coset_digits(i)
                    .iter()
                    .rev()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                Entry { digits, re: v.re, im: v.im }
            })
            .collect();
        TestFunctionFile {
            p: f.base.get(),
            support: f.support,
            resolution: f.resolution,
            entries,
        }
    }
}

impl TryFrom<TestFunctionFile> for TestFunction {
    type Error = AnalysisError;

    fn try_from(file: TestFunctionFile) -> Result<Self, Self::Error> {
        let base = PrimeBase::new(file.p)?;
        let mut f = TestFunction::zeros(base, file.support, file.resolution)?;
        let width = (file.support + file.resolution) as usize;
        let p = file.p as usize;
        for e in file.entries {
            let digits: Vec<u32> = e
                .digits
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| AnalysisError::Json(format!("bad digit string {:?}", e.digits)))?;
            if digits.len() != width || digits.iter().any(|&d| d as usize >= p) {
                return Err(AnalysisError::Json(format!(
                    "digit string {:?} does not address a coset of this window",
                    e.digits
                )));
            }
            let index = digits.iter().fold(0usize, |acc, &d| acc * p + d as usize);
            f.values[index] = Complex64::new(e.re, e.im);
        }
        Ok(f)
    }
}
