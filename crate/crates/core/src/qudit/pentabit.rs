//! Nucleotide sequences as registers of 5-level systems.

use std::fmt;

use num_complex::Complex64;

use super::register::QuditRegister;
use super::{QuditError, QuditState};

const P: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Gap,
    A,
    C,
    T,
    G,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [Symbol::Gap, Symbol::A, Symbol::C, Symbol::T, Symbol::G];

    fn slot(self) -> usize {
        self as usize
    }

    /// `-` is the gap; nucleotides are accepted in either case.
    pub fn from_char(c: char) -> Result<Self, QuditError> {
        match c.to_ascii_uppercase() {
            '-' => Ok(Symbol::Gap),
            'A' => Ok(Symbol::A),
            'C' => Ok(Symbol::C),
            'T' => Ok(Symbol::T),
            'G' => Ok(Symbol::G),
            _ => Err(QuditError::UnknownSymbol(c)),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Symbol::Gap => '-',
            Symbol::A => 'A',
            Symbol::C => 'C',
            Symbol::T => 'T',
            Symbol::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// Symbol-to-level table. Complementary bases must sum to zero mod 5:
/// `A + G ≡ 0` and `T + C ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PentabitAlphabet {
    levels: [u32; 5],
}

impl Default for PentabitAlphabet {
    /// gap, A, C, T, G on levels 0, 1, 2, 3, 4.
    fn default() -> Self {
        PentabitAlphabet { levels: [0, 1, 2, 3, 4] }
    }
}

impl PentabitAlphabet {
    /// Levels listed in the order gap, A, C, T, G.
    pub fn new(levels: [u32; 5]) -> Result<Self, QuditError> {
        if let Some(&v) = levels.iter().find(|&&v| v >= P) {
            return Err(QuditError::InvalidAssignment(format!("level {v} is not below 5")));
        }
        for i in 0..5 {
            for j in 0..i {
                if levels[i] == levels[j] {
                    return Err(QuditError::InvalidAssignment(format!(
                        "{} and {} share level {}",
                        Symbol::ALL[j],
                        Symbol::ALL[i],
                        levels[i]
                    )));
                }
            }
        }
        let at = |s: Symbol| levels[s.slot()];
        if (at(Symbol::A) + at(Symbol::G)) % P != 0 {
            return Err(QuditError::InvalidAssignment("A + G is not 0 mod 5".into()));
        }
        if (at(Symbol::T) + at(Symbol::C)) % P != 0 {
            return Err(QuditError::InvalidAssignment("T + C is not 0 mod 5".into()));
        }
        Ok(PentabitAlphabet { levels })
    }

    pub fn level(&self, s: Symbol) -> u32 {
        self.levels[s.slot()]
    }

    pub fn symbol(&self, level: u32) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|s| self.level(*s) == level)
    }
}

/// The basis state of a sequence such as `"AC-TG"`, one qudit per symbol.
pub fn pentabit_encode(seq: &str, alphabet: &PentabitAlphabet, cap: usize) -> Result<QuditRegister, QuditError> {
    let digits = seq
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| Symbol::from_char(c).map(|s| alphabet.level(s)))
        .collect::<Result<Vec<_>, _>>()?;
    if digits.is_empty() {
        return Err(QuditError::EmptySequence);
    }
    QuditRegister::basis(P, &digits, cap)
}

/// `α_0|-⟩ + α_1|A⟩ + α_2|C⟩ + α_3|T⟩ + α_4|G⟩` with the weights given in that
/// symbol order, rescaled to unit norm.
pub fn pentabit_superpose(weights: [Complex64; 5], alphabet: &PentabitAlphabet) -> Result<QuditState, QuditError> {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); P as usize];
    for (s, w) in Symbol::ALL.into_iter().zip(weights) {
        amplitudes[alphabet.level(s) as usize] = w;
    }
    QuditState::from_weights(amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::DEFAULT_AMPLITUDE_CAP;

    #[test]
    fn default_table_pairs_complements() {
        let a = PentabitAlphabet::default();
        assert_eq!(a.level(Symbol::A), 1);
        assert_eq!((a.level(Symbol::A) + a.level(Symbol::G)) % 5, 0);
        assert_eq!((a.level(Symbol::T) + a.level(Symbol::C)) % 5, 0);
        assert_eq!(a.symbol(3), Some(Symbol::T));
        assert!(PentabitAlphabet::new([0, 2, 1, 4, 3]).is_ok());
        assert!(PentabitAlphabet::new([0, 1, 2, 4, 3]).is_err());
        assert!(PentabitAlphabet::new([0, 1, 1, 4, 4]).is_err());
        assert!(PentabitAlphabet::new([0, 1, 2, 3, 5]).is_err());
    }

    #[test]
    fn encoding() {
        let a = PentabitAlphabet::default();
        let reg = pentabit_encode("ACTG", &a, DEFAULT_AMPLITUDE_CAP).unwrap();
        let index = ((5 + 2) * 5 + 3) * 5 + 4;
        assert_eq!(reg.amplitudes()[index], Complex64::new(1.0, 0.0));
        assert_eq!(reg.digits_of(index), vec![1, 2, 3, 4]);
        let gap = pentabit_encode("-", &a, DEFAULT_AMPLITUDE_CAP).unwrap();
        assert_eq!(gap.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert_eq!(pentabit_encode("", &a, DEFAULT_AMPLITUDE_CAP), Err(QuditError::EmptySequence));
        assert_eq!(pentabit_encode("AXG", &a, DEFAULT_AMPLITUDE_CAP), Err(QuditError::UnknownSymbol('X')));
        assert!(matches!(
            pentabit_encode(&"A".repeat(9), &a, DEFAULT_AMPLITUDE_CAP),
            Err(QuditError::CapExceeded { .. })
        ));
        let swapped = PentabitAlphabet::new([0, 2, 1, 4, 3]).unwrap();
        let reg = pentabit_encode("a", &swapped, DEFAULT_AMPLITUDE_CAP).unwrap();
        assert_eq!(reg.amplitudes()[2], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn superposition() {
        let w = [0.0, 1.0, 0.0, 0.0, 1.0].map(|x| Complex64::new(x, 0.0));
        let s = pentabit_superpose(w, &PentabitAlphabet::default()).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((s.amplitudes()[1].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[4].re - h).abs() < 1e-15);
        assert_eq!(
            pentabit_superpose([Complex64::default(); 5], &PentabitAlphabet::default()),
            Err(QuditError::ZeroWeights)
        );
    }
}
