//! `F|x⟩ = ω^(-1/2) Σ_y exp(2πi xy/ω) |y⟩` on `ω = p^n` basis states.

use num_complex::Complex64;

use super::{QuditError, QuditRegister};

/// Registers up to this many amplitudes use the dense matrix product.
pub const DENSE_QFT_LIMIT: usize = 4096;

fn roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|t| Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / n as f64))
        .collect()
}

fn dft_dense(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let w = roots(n);
    (0..n)
        .map(|y| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut phase = 0usize;
            for a in v {
                acc += a * w[phase];
                phase += y;
                if phase >= n {
                    phase -= n;
                }
            }
            acc
        })
        .collect()
}

/// Decimation in time: `X[k] = Σ_r e^(2πi rk/N) Y_r[k mod N/p]` where `Y_r` is
/// the transform of the samples `x[pm + r]`.
fn dft_radix(v: &[Complex64], p: usize) -> Vec<Complex64> {
    let n = v.len();
    if n <= p {
        return dft_dense(v);
    }
    let m = n / p;
    let subs: Vec<Vec<Complex64>> = (0..p)
        .map(|r| {
            let decimated: Vec<Complex64> = v.iter().skip(r).step_by(p).copied().collect();
            dft_radix(&decimated, p)
        })
        .collect();
    let w = roots(n);
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (r, sub) in subs.iter().enumerate() {
                acc += w[(r * k) % n] * sub[k % m];
            }
            acc
        })
        .collect()
}

fn scaled(v: Vec<Complex64>) -> Vec<Complex64> {
    let s = 1.0 / (v.len() as f64).sqrt();
    v.into_iter().map(|a| a * s).collect()
}

pub fn qft_dense(reg: &QuditRegister) -> QuditRegister {
    reg.with_amplitudes(scaled(dft_dense(reg.amplitudes())))
}

pub fn qft_fast(reg: &QuditRegister) -> QuditRegister {
    reg.with_amplitudes(scaled(dft_radix(reg.amplitudes(), reg.levels() as usize)))
}

pub fn qft(reg: &QuditRegister) -> QuditRegister {
    if reg.amplitudes().len() <= DENSE_QFT_LIMIT {
        qft_dense(reg)
    } else {
        qft_fast(reg)
    }
}

/// `F ⊗ I` where `F` acts on the leading `first` qudits.
pub fn qft_on_first(reg: &QuditRegister, first: usize) -> Result<QuditRegister, QuditError> {
    if first > reg.qudits() {
        return Err(QuditError::Position {
            pos: first,
            n: reg.qudits(),
        });
    }
    let p = reg.levels() as usize;
    let rest = p.pow((reg.qudits() - first) as u32);
    let omega = p.pow(first as u32);
    let amps = reg.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    for s in 0..rest {
        let column: Vec<Complex64> = (0..omega).map(|x| amps[x * rest + s]).collect();
        let t = if omega <= DENSE_QFT_LIMIT {
            dft_dense(&column)
        } else {
            dft_radix(&column, p)
        };
        for (y, v) in scaled(t).into_iter().enumerate() {
            out[y * rest + s] = v;
        }
    }
    Ok(reg.with_amplitudes(out))
}
