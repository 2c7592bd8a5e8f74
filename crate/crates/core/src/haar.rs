//! Haar pyramid (Laplacian scheme) in real and exact p-adic arithmetic.
//!
//! Real mode averages: `s = (a + b)/2`, `d = (a - b)/2`, with
//! `a = s + d`, `b = s - d` on the way back.
//! p-adic mode keeps sums unnormalized, `s = b + a`, `d = b - a` for a pair
//! `(a, b) = (s_2k, s_2k+1)`, and divides by 2 only when reconstructing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{PadicError, PadicNumber, PrimeBase};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HaarError {
    #[error("signal is empty")]
    Empty,
    #[error("signal length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("depth {depth} exceeds log2 of the signal length ({max})")]
    DepthTooLarge { depth: usize, max: usize },
    #[error("pyramid shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precision exhausted: reconstruction would be known to p^{available}, need p^{needed}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("json: {0}")]
    Json(String),
}

/// A coarse level `s^J` and the detail levels `d^1, …, d^J`, finest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid<T> {
    pub coarse: Vec<T>,
    pub details: Vec<Vec<T>>,
}

impl<T> Pyramid<T> {
    pub fn depth(&self) -> usize {
        self.details.len()
    }

    /// Length of the signal the pyramid reconstructs to.
    pub fn signal_len(&self) -> usize {
        self.coarse.len() << self.details.len()
    }

    fn check_shape(&self) -> Result<(), HaarError> {
        if self.coarse.is_empty() {
            return Err(HaarError::Empty);
        }
        for (i, d) in self.details.iter().enumerate() {
            let expected = self.coarse.len() << (self.details.len() - 1 - i);
            if d.len() != expected {
                return Err(HaarError::ShapeMismatch(format!(
                    "detail level {} has {} values, expected {expected}",
                    i + 1,
                    d.len()
                )));
            }
        }
        Ok(())
    }
}

fn check_signal(len: usize, depth: usize) -> Result<(), HaarError> {
    if len == 0 {
        return Err(HaarError::Empty);
    }
    if !len.is_power_of_two() {
        return Err(HaarError::NotPowerOfTwo(len));
    }
    let max = len.trailing_zeros() as usize;
    if depth > max {
        return Err(HaarError::DepthTooLarge { depth, max });
    }
    Ok(())
}

pub fn haar_forward_real(s0: &[f64], depth: usize) -> Result<Pyramid<f64>, HaarError> {
    check_signal(s0.len(), depth)?;
    let mut s = s0.to_vec();
    let mut details = Vec::with_capacity(depth);
    for _ in 0..depth {
        let (next, d): (Vec<f64>, Vec<f64>) = s
            .chunks_exact(2)
            .map(|pair| ((pair[0] + pair[1]) / 2.0, (pair[0] - pair[1]) / 2.0))
            .unzip();
        details.push(d);
        s = next;
    }
    Ok(Pyramid { coarse: s, details })
}

pub fn haar_inverse_real(pyr: &Pyramid<f64>) -> Result<Vec<f64>, HaarError> {
    pyr.check_shape()?;
    let mut s = pyr.coarse.clone();
    for d in pyr.details.iter().rev() {
        s = s
            .iter()
            .zip(d)
            .flat_map(|(s, d)| [s + d, s - d])
            .collect();
    }
    Ok(s)
}

/// `Σ_j 2^j Σ (d^j_k)^2 + 2^J Σ (s^J_k)^2`, which equals `Σ (s^0_k)^2` under the
/// averaging normalization.
pub fn weighted_energy(pyr: &Pyramid<f64>) -> f64 {
    let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    let details: f64 = pyr
        .details
        .iter()
        .enumerate()
        .map(|(i, d)| 2f64.powi(i as i32 + 1) * sq(d))
        .sum();
    details + 2f64.powi(pyr.depth() as i32) * sq(&pyr.coarse)
}

fn common_base(values: &[PadicNumber]) -> Result<PrimeBase, HaarError> {
    let base = values.first().ok_or(HaarError::Empty)?.base();
    if let Some(x) = values.iter().find(|x| x.base() != base) {
        return Err(PadicError::BaseMismatch(base.get(), x.base().get()).into());
    }
    Ok(base)
}

pub fn haar_forward_padic(s0: &[PadicNumber], depth: usize) -> Result<Pyramid<PadicNumber>, HaarError> {
    check_signal(s0.len(), depth)?;
    common_base(s0)?;
    let mut s = s0.to_vec();
    let mut details = Vec::with_capacity(depth);
    for _ in 0..depth {
        let mut next = Vec::with_capacity(s.len() / 2);
        let mut d = Vec::with_capacity(s.len() / 2);
        for pair in s.chunks_exact(2) {
            next.push(pair[1].checked_add(&pair[0])?);
            d.push(pair[1].checked_sub(&pair[0])?);
        }
        details.push(d);
        s = next;
    }
    Ok(Pyramid { coarse: s, details })
}

/// Absolute precision guaranteed for the output of [`haar_inverse_padic`]:
/// the least precision among the coefficients, lowered by `ord_p(2)` for
/// each level.
pub fn reconstruction_precision(pyr: &Pyramid<PadicNumber>) -> Result<i64, HaarError> {
    pyr.check_shape()?;
    let base = common_base(&pyr.coarse)?;
    let min = pyr
        .coarse
        .iter()
        .chain(pyr.details.iter().flatten())
        .map(|x| x.absolute_precision())
        .min()
        .expect("nonempty");
    let loss = if base.get() == 2 { pyr.depth() as i64 } else { 0 };
    Ok(min - loss)
}

pub fn haar_inverse_padic(pyr: &Pyramid<PadicNumber>) -> Result<Vec<PadicNumber>, HaarError> {
    let available = reconstruction_precision(pyr)?;
    if available < 1 {
        return Err(HaarError::PrecisionExhausted { needed: 1, available });
    }
    let base = common_base(&pyr.coarse)?;
    if let Some(x) = pyr.details.iter().flatten().find(|x| x.base() != base) {
        return Err(PadicError::BaseMismatch(base.get(), x.base().get()).into());
    }
    let mut s = pyr.coarse.clone();
    for d in pyr.details.iter().rev() {
        let mut finer = Vec::with_capacity(2 * s.len());
        for (s, d) in s.iter().zip(d) {
            finer.push(s.checked_sub(d)?.div_by_integer(2)?);
            finer.push(s.checked_add(d)?.div_by_integer(2)?);
        }
        s = finer;
    }
    Ok(s)
}

/// The value taken by the Qp Haar analog outside the open unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarConvention {
    /// Complex `-1`.
    Complex,
    /// `bar 1 = (p-1) + (p-1)p + …` with the given number of digits.
    Padic { precision: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum HaarValue {
    Complex(Complex64),
    Padic(PadicNumber),
}

/// `h(x) = 1` for `|x|_p < 1` and `-1` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HaarWaveletQp {
    pub base: PrimeBase,
    pub convention: HaarConvention,
}

impl HaarWaveletQp {
    pub fn new(base: PrimeBase, convention: HaarConvention) -> Self {
        HaarWaveletQp { base, convention }
    }

    pub fn evaluate(&self, x: &PadicNumber) -> Result<HaarValue, HaarError> {
        if x.base() != self.base {
            return Err(PadicError::BaseMismatch(x.base().get(), self.base.get()).into());
        }
        let inside = x.valuation().is_none_or(|v| v >= 1);
        let sign = if inside { 1 } else { -1 };
        Ok(match self.convention {
            HaarConvention::Complex => HaarValue::Complex(Complex64::new(sign as f64, 0.0)),
            HaarConvention::Padic { precision } => {
                HaarValue::Padic(PadicNumber::from_integer(sign, self.base, precision)?)
            }
        })
    }
}

/// A pyramid of either arithmetic, as read from or written to JSON
/// `{mode, p?, J, coarse, details}`. p-adic values use the digit text format.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyPyramid {
    Real(Pyramid<f64>),
    Padic(PrimeBase, Pyramid<PadicNumber>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum PyramidFile {
    Real {
        #[serde(rename = "J")]
        depth: usize,
        coarse: Vec<f64>,
        details: Vec<Vec<f64>>,
    },
    Padic {
        p: u32,
        #[serde(rename = "J")]
        depth: usize,
        coarse: Vec<String>,
        details: Vec<Vec<String>>,
    },
}

impl AnyPyramid {
    pub fn to_json(&self) -> String {
        let file = match self {
            AnyPyramid::Real(p) => PyramidFile::Real {
                depth: p.depth(),
                coarse: p.coarse.clone(),
                details: p.details.clone(),
            },
            AnyPyramid::Padic(base, p) => {
                let text = |v: &[PadicNumber]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
                PyramidFile::Padic {
                    p: base.get(),
                    depth: p.depth(),
                    coarse: text(&p.coarse),
                    details: p.details.iter().map(|d| text(d)).collect(),
                }
            }
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, HaarError> {
        let file: PyramidFile = serde_json::from_str(s).map_err(|e| HaarError::Json(e.to_string()))?;
        let (depth, pyr) = match file {
            PyramidFile::Real { depth, coarse, details } => (depth, AnyPyramid::Real(Pyramid { coarse, details })),
            PyramidFile::Padic {
                p,
                depth,
                coarse,
                details,
            } => {
                let base = PrimeBase::new(p)?;
                let parse = |v: &[String]| -> Result<Vec<PadicNumber>, HaarError> {
                    v.iter()
                        .map(|t| {
                            let x: PadicNumber = t.parse()?;
                            if x.base() != base {
                                return Err(PadicError::BaseMismatch(x.base().get(), p).into());
                            }
                            Ok(x)
                        })
                        .collect()
                };
                let pyramid = Pyramid {
                    coarse: parse(&coarse)?,
                    details: details.iter().map(|d| parse(d)).collect::<Result<_, _>>()?,
                };
                (depth, AnyPyramid::Padic(base, pyramid))
            }
        };
        let actual = match &pyr {
            AnyPyramid::Real(p) => {
                p.check_shape()?;
                p.depth()
            }
            AnyPyramid::Padic(_, p) => {
                p.check_shape()?;
                p.depth()
            }
        };
        if actual != depth {
            return Err(HaarError::ShapeMismatch(format!("J = {depth} but {actual} detail levels")));
        }
        Ok(pyr)
    }
}
