use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::gates::{hadamard, GateMatrix, HadamardVariant};
use super::{check_levels, squared_norm, QuditError, NORM_TOLERANCE};

/// `n` p-level systems as `p^n` amplitudes. Basis index `x` has the base-p
/// digits `x_1 … x_n` with `x_1` most significant, so qudit 0 is the leftmost
/// factor of `|x_1⟩ ⊗ … ⊗ |x_n⟩`.
///
/// The norm is not forced to 1: a non-unitary gate may leave the register
/// unnormalized, and [`measure`] refuses such registers.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditRegister {
    p: u32,
    n: usize,
    amplitudes: Vec<Complex64>,
}

pub(crate) fn amplitude_count(p: u32, n: usize, cap: usize) -> Result<usize, QuditError> {
    check_levels(p)?;
    u32::try_from(n)
        .ok()
        .and_then(|e| (p as usize).checked_pow(e))
        .filter(|&c| c <= cap)
        .ok_or(QuditError::CapExceeded { p, n, cap })
}

impl QuditRegister {
    /// The basis state `|digits⟩`.
    pub fn basis(p: u32, digits: &[u32], cap: usize) -> Result<Self, QuditError> {
        let size = amplitude_count(p, digits.len(), cap)?;
        let mut index = 0usize;
        for &d in digits {
            if d >= p {
                return Err(QuditError::OutOfRange {
                    value: d as usize,
                    bound: p as usize,
                });
            }
            index = index * p as usize + d as usize;
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(QuditRegister {
            p,
            n: digits.len(),
            amplitudes,
        })
    }

    pub fn zero_state(p: u32, n: usize, cap: usize) -> Result<Self, QuditError> {
        QuditRegister::basis(p, &vec![0; n], cap)
    }

    /// A register with the given amplitudes, required to have unit norm.
    pub fn from_amplitudes(p: u32, n: usize, amplitudes: Vec<Complex64>, cap: usize) -> Result<Self, QuditError> {
        let reg = QuditRegister::from_amplitudes_unchecked(p, n, amplitudes, cap)?;
        if !reg.is_normalized() {
            return Err(QuditError::Unnormalized(reg.squared_norm()));
        }
        Ok(reg)
    }

    /// Like [`QuditRegister::from_amplitudes`] without the norm check.
    pub fn from_amplitudes_unchecked(
        p: u32,
        n: usize,
        amplitudes: Vec<Complex64>,
        cap: usize,
    ) -> Result<Self, QuditError> {
        let size = amplitude_count(p, n, cap)?;
        if amplitudes.len() != size {
            return Err(QuditError::DimensionMismatch(format!(
                "{} amplitudes for {p}^{n}",
                amplitudes.len()
            )));
        }
        Ok(QuditRegister { p, n, amplitudes })
    }

    pub fn levels(&self) -> u32 {
        self.p
    }

    pub fn qudits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.amplitudes.len());
        QuditRegister {
            p: self.p,
            n: self.n,
            amplitudes,
        }
    }

    pub fn squared_norm(&self) -> f64 {
        squared_norm(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        (self.squared_norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn renormalize(&self) -> Result<Self, QuditError> {
        let n = self.squared_norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QuditError::ZeroWeights);
        }
        let s = 1.0 / n.sqrt();
        Ok(self.with_amplitudes(self.amplitudes.iter().map(|a| a * s).collect()))
    }

    /// The amplitudes as a JSON array of `{re, im}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Amp {
            re: f64,
            im: f64,
        }
        let amps: Vec<Amp> = self.amplitudes.iter().map(|a| Amp { re: a.re, im: a.im }).collect();
        serde_json::to_string_pretty(&amps).expect("serializable")
    }

    /// Base-p digits of a basis index, most significant first.
    pub fn digits_of(&self, mut index: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (index % self.p as usize) as u32;
            index /= self.p as usize;
        }
        out
    }

    fn check_position(&self, pos: usize) -> Result<(), QuditError> {
        if pos >= self.n {
            return Err(QuditError::Position { pos, n: self.n });
        }
        Ok(())
    }

    fn stride(&self, pos: usize) -> usize {
        (self.p as usize).pow((self.n - 1 - pos) as u32)
    }

    /// Applies a `p × p` gate to qudit `pos`.
    pub fn apply_single(&self, gate: &GateMatrix, pos: usize) -> Result<Self, QuditError> {
        self.check_position(pos)?;
        let p = self.p as usize;
        if gate.dim() != p {
            return Err(QuditError::DimensionMismatch(format!("gate of dimension {} on {p}-level qudit", gate.dim())));
        }
        let stride = self.stride(pos);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        let mut local = vec![Complex64::new(0.0, 0.0); p];
        for block in (0..self.amplitudes.len()).step_by(stride * p) {
            for offset in 0..stride {
                let base = block + offset;
                for (k, slot) in local.iter_mut().enumerate() {
                    *slot = self.amplitudes[base + k * stride];
                }
                for (k, v) in gate.apply(&local)?.into_iter().enumerate() {
                    out[base + k * stride] = v;
                }
            }
        }
        Ok(self.with_amplitudes(out))
    }

    /// Applies a `p² × p²` gate to the qudit pair `(first, second)`, the gate's
    /// basis index being `x_first · p + x_second`.
    pub fn apply_pair(&self, gate: &GateMatrix, first: usize, second: usize) -> Result<Self, QuditError> {
        self.check_position(first)?;
        self.check_position(second)?;
        if first == second {
            return Err(QuditError::DimensionMismatch("two-qudit gate on a single qudit".into()));
        }
        let p = self.p as usize;
        if gate.dim() != p * p {
            return Err(QuditError::DimensionMismatch(format!("gate of dimension {} on a qudit pair", gate.dim())));
        }
        let (s1, s2) = (self.stride(first), self.stride(second));
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        let mut local = vec![Complex64::new(0.0, 0.0); p * p];
        for index in 0..self.amplitudes.len() {
            // visit each group once, from the member with both digits zero
            if (index / s1) % p != 0 || (index / s2) % p != 0 {
                continue;
            }
            for a in 0..p {
                for b in 0..p {
                    local[a * p + b] = self.amplitudes[index + a * s1 + b * s2];
                }
            }
            for (k, v) in gate.apply(&local)?.into_iter().enumerate() {
                out[index + (k / p) * s1 + (k % p) * s2] = v;
            }
        }
        Ok(self.with_amplitudes(out))
    }
}

/// The chosen Hadamard on every qudit. Returns the register together with
/// its norm defect `|‖ψ‖² - 1|`, which is nonzero only for the sign variant
/// at `p > 2`.
pub fn register_hadamard(reg: &QuditRegister, variant: HadamardVariant) -> Result<(QuditRegister, f64), QuditError> {
    let h = hadamard(reg.levels(), variant)?;
    let mut out = reg.clone();
    for pos in 0..reg.qudits() {
        out = out.apply_single(&h, pos)?;
    }
    let defect = (out.squared_norm() - 1.0).abs();
    Ok((out, defect))
}

/// `ω^(-1/2) Σ_x |x⟩ ⊗ |f(x)⟩` for `f: Z_ω → Z_ω`, `ω = p^n`, on `2n` qudits.
pub fn function_state(p: u32, n: usize, table: &[usize], cap: usize) -> Result<QuditRegister, QuditError> {
    let omega = amplitude_count(p, n, cap)?;
    if table.len() != omega {
        return Err(QuditError::DimensionMismatch(format!("table of length {} for ω = {omega}", table.len())));
    }
    let size = amplitude_count(p, 2 * n, cap)?;
    let s = 1.0 / (omega as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); size];
    for (x, &fx) in table.iter().enumerate() {
        if fx >= omega {
            return Err(QuditError::OutOfRange { value: fx, bound: omega });
        }
        amplitudes[x * omega + fx] = Complex64::new(s, 0.0);
    }
    QuditRegister::from_amplitudes(p, 2 * n, amplitudes, cap)
}

/// Outcome counts of repeated measurement in the computational basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub p: u32,
    pub n: usize,
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
}

#[derive(Serialize)]
pub(crate) struct HistogramFile {
    p: u32,
    n: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Histogram {
    /// Basis label of an outcome: digits `x_1 … x_n` separated by spaces when `p > 10`.
    pub fn label(&self, index: usize) -> String {
        let mut digits = vec![0usize; self.n];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % self.p as usize;
            rest /= self.p as usize;
        }
        let sep = if self.p > 10 { " " } else { "" };
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(sep)
    }

    pub(crate) fn file(&self) -> HistogramFile {
        HistogramFile {
            p: self.p,
            n: self.n,
            shots: self.shots,
            counts: self.counts.iter().map(|(k, v)| (self.label(*k), *v)).collect(),
        }
    }

    /// `{p, n, shots, counts}` with outcomes keyed by their basis label.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.file()).expect("serializable")
    }
}

/// Born-rule sampling of `shots` outcomes with a seeded generator. The
/// register is not collapsed.
pub fn measure(reg: &QuditRegister, shots: u64, seed: u64) -> Result<Histogram, QuditError> {
    if shots == 0 {
        return Err(QuditError::ZeroShots);
    }
    if !reg.is_normalized() {
        return Err(QuditError::Unnormalized(reg.squared_norm()));
    }
    let weights: Vec<f64> = reg.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let dist = WeightedIndex::new(&weights).map_err(|_| QuditError::ZeroWeights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(Histogram {
        p: reg.levels(),
        n: reg.qudits(),
        shots,
        counts,
    })
}
