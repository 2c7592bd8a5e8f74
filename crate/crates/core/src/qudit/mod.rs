//! Dense state-vector simulation of p-level quantum systems.

mod circuit;
mod gates;
mod pentabit;
mod qft;
mod register;

pub use circuit::{run_circuit, run_circuit_observed, Circuit, Instruction, RunOptions, RunReport};
pub use gates::{hadamard, hadamard_fourier, hadamard_sign, uf_gate, GateMatrix, HadamardVariant};
pub use pentabit::{pentabit_encode, pentabit_superpose, PentabitAlphabet, Symbol};
pub use qft::{qft, qft_dense, qft_fast, qft_on_first, DENSE_QFT_LIMIT};
pub use register::{function_state, measure, register_hadamard, Histogram, QuditRegister};

use num_complex::Complex64;
use thiserror::Error;

/// Default bound on the number of amplitudes `p^n` of a register.
pub const DEFAULT_AMPLITUDE_CAP: usize = 1_000_000;

/// Tolerance on `Σ|α|² = 1`.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuditError {
    #[error("number of levels must be at least 2, got {0}")]
    InvalidLevels(u32),
    #[error("state is not normalized: squared norm {0}")]
    Unnormalized(f64),
    #[error("{p}^{n} amplitudes exceed the cap of {cap}")]
    CapExceeded { p: u32, n: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value {value} out of range 0..{bound}")]
    OutOfRange { value: usize, bound: usize },
    #[error("qudit position {pos} out of range for {n} qudits")]
    Position { pos: usize, n: usize },
    #[error("unknown nucleotide symbol {0:?}")]
    UnknownSymbol(char),
    #[error("empty sequence")]
    EmptySequence,
    #[error("invalid pentabit assignment: {0}")]
    InvalidAssignment(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("all weights are zero")]
    ZeroWeights,
}

pub(crate) fn check_levels(p: u32) -> Result<(), QuditError> {
    if p < 2 {
        return Err(QuditError::InvalidLevels(p));
    }
    Ok(())
}

pub(crate) fn squared_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// A single p-level system `Σ α_i |i⟩` with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    p: u32,
    amplitudes: Vec<Complex64>,
}

impl QuditState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QuditError> {
        let p = u32::try_from(amplitudes.len()).map_err(|_| QuditError::InvalidLevels(u32::MAX))?;
        check_levels(p)?;
        let n = squared_norm(&amplitudes);
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuditError::Unnormalized(n));
        }
        Ok(QuditState { p, amplitudes })
    }

    /// Rescales arbitrary weights to unit norm.
    pub fn from_weights(weights: Vec<Complex64>) -> Result<Self, QuditError> {
        let n = squared_norm(&weights);
        if n == 0.0 || !n.is_finite() {
            return Err(QuditError::ZeroWeights);
        }
        let s = 1.0 / n.sqrt();
        QuditState::new(weights.into_iter().map(|w| w * s).collect())
    }

    pub fn basis(p: u32, level: u32) -> Result<Self, QuditError> {
        check_levels(p)?;
        if level >= p {
            return Err(QuditError::OutOfRange {
                value: level as usize,
                bound: p as usize,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); p as usize];
        amplitudes[level as usize] = Complex64::new(1.0, 0.0);
        Ok(QuditState { p, amplitudes })
    }

    pub fn levels(&self) -> u32 {
        self.p
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// A map `Z_p → Z_p` given by its value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPFunction {
    p: u32,
    table: Vec<u32>,
}

impl ModPFunction {
    pub fn new(p: u32, table: Vec<u32>) -> Result<Self, QuditError> {
        check_levels(p)?;
        if table.len() != p as usize {
            return Err(QuditError::DimensionMismatch(format!(
                "table has {} entries, expected {p}",
                table.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= p) {
            return Err(QuditError::OutOfRange {
                value: v as usize,
                bound: p as usize,
            });
        }
        Ok(ModPFunction { p, table })
    }

    pub fn levels(&self) -> u32 {
        self.p
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qudit_states() {
        let s = QuditState::from_weights(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]).unwrap();
        assert!((s.amplitudes()[1] - Complex64::new(0.0, 0.8)).norm() < 1e-15);
        assert!(matches!(
            QuditState::new(vec![Complex64::new(1.0, 0.0); 3]),
            Err(QuditError::Unnormalized(_))
        ));
        assert_eq!(QuditState::from_weights(vec![Complex64::default(); 3]), Err(QuditError::ZeroWeights));
        assert_eq!(QuditState::basis(3, 2).unwrap().amplitudes()[2], Complex64::new(1.0, 0.0));
        assert!(QuditState::basis(3, 3).is_err());
        assert!(QuditState::basis(1, 0).is_err());
    }

    #[test]
    fn mod_p_tables() {
        assert!(ModPFunction::new(3, vec![0, 1, 2]).is_ok());
        assert!(ModPFunction::new(3, vec![0, 3, 2]).is_err());
        assert!(ModPFunction::new(3, vec![0, 1]).is_err());
    }
}
