use num_complex::Complex64;

use super::{check_levels, ModPFunction, QuditError};

/// A square matrix acting on amplitudes, with its distance from unitarity
/// `max |G†G - I|` measured at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    unitarity_report: f64,
}

fn unitarity_defect(dim: usize, entries: &[Complex64]) -> f64 {
    // G†G[i][j] = Σ_k conj(G[k][i]) G[k][j], accumulated from the nonzeros of each row
    let mut gram = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut nonzero = Vec::with_capacity(dim);
    for row in entries.chunks_exact(dim) {
        nonzero.clear();
        nonzero.extend(row.iter().enumerate().filter(|(_, v)| **v != Complex64::new(0.0, 0.0)));
        for &(i, a) in &nonzero {
            let a = a.conj();
            for &(j, b) in &nonzero {
                gram[i * dim + j] += a * b;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[i * dim + j] - target).norm());
        }
    }
    worst
}

impl GateMatrix {
    /// Row-major entries of a `dim × dim` matrix.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, QuditError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(QuditError::DimensionMismatch(format!(
                "{} entries for a {dim} × {dim} matrix",
                entries.len()
            )));
        }
        let unitarity_report = unitarity_defect(dim, &entries);
        Ok(GateMatrix {
            dim,
            entries,
            unitarity_report,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn unitarity_report(&self) -> f64 {
        self.unitarity_report
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>, QuditError> {
        if v.len() != self.dim {
            return Err(QuditError::DimensionMismatch(format!(
                "vector of length {} for a gate of dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &GateMatrix) -> Result<GateMatrix, QuditError> {
        if other.dim != self.dim {
            return Err(QuditError::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        GateMatrix::new(d, out)
    }

    /// Exactly one entry equal to 1 in every row and column, all others 0.
    pub fn is_permutation(&self) -> bool {
        let d = self.dim;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut col_hits = vec![0u32; d];
        for row in self.entries.chunks_exact(d) {
            let mut hits = 0;
            for (j, v) in row.iter().enumerate() {
                if *v == one {
                    hits += 1;
                    col_hits[j] += 1;
                } else if *v != zero {
                    return false;
                }
            }
            if hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&h| h == 1)
    }
}

/// `U_f |x⟩|s⟩ = |x⟩|s ⊕ f(x)⟩` on `p²` basis states indexed `x·p + s`,
/// with `⊕` addition mod p.
pub fn uf_gate(f: &ModPFunction) -> GateMatrix {
    let p = f.levels() as usize;
    let d = p * p;
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for x in 0..p {
        for s in 0..p {
            let out = x * p + (s + f.apply(x as u32) as usize) % p;
            entries[out * d + x * p + s] = Complex64::new(1.0, 0.0);
        }
    }
    GateMatrix::new(d, entries).expect("square")
}

/// `H|x⟩ = p^(-1/2) Σ_y (-1)^(x·y mod p) |y⟩`. Unitary only for `p = 2`.
pub fn hadamard_sign(p: u32) -> Result<GateMatrix, QuditError> {
    check_levels(p)?;
    let n = p as usize;
    let s = 1.0 / (p as f64).sqrt();
    let entries = (0..n * n)
        .map(|k| {
            let (y, x) = (k / n, k % n);
            let sign = if ((x * y) % n).is_multiple_of(2) { 1.0 } else { -1.0 };
            Complex64::new(sign * s, 0.0)
        })
        .collect();
    GateMatrix::new(n, entries)
}

/// `H|x⟩ = p^(-1/2) Σ_y ω^(xy) |y⟩` with `ω = exp(2πi/p)`.
pub fn hadamard_fourier(p: u32) -> Result<GateMatrix, QuditError> {
    check_levels(p)?;
    let n = p as usize;
    let s = 1.0 / (p as f64).sqrt();
    let entries = (0..n * n)
        .map(|k| {
            let (y, x) = (k / n, k % n);
            Complex64::from_polar(s, std::f64::consts::TAU * ((x * y) % n) as f64 / p as f64)
        })
        .collect();
    GateMatrix::new(n, entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HadamardVariant {
    /// Signs `(-1)^(xy mod p)`.
    Sign,
    /// Phases `ω^(xy)`.
    #[default]
    Fourier,
}

impl std::str::FromStr for HadamardVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sign" => Ok(HadamardVariant::Sign),
            "fourier" => Ok(HadamardVariant::Fourier),
            other => Err(format!("unknown Hadamard variant {other:?} (sign|fourier)")),
        }
    }
}

pub fn hadamard(p: u32, variant: HadamardVariant) -> Result<GateMatrix, QuditError> {
    match variant {
        HadamardVariant::Sign => hadamard_sign(p),
        HadamardVariant::Fourier => hadamard_fourier(p),
    }
}
