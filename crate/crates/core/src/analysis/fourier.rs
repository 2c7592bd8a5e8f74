//! The p-adic Fourier transform `f̃(ξ) = ∫ f(x) χ_p(ξx) dx` on test functions.
//!
//! For `f` supported in `{|x| <= p^K}` and constant on `p^J`-cosets, `f̃` is
//! supported in `{|ξ| <= p^J}` and constant on `p^K`-cosets. With
//! `x = B p^(-K)` and `ξ = Ξ p^(-J)`, `{ξx}_p = (ΞB mod p^(K+J)) / p^(K+J)`, so
//! the transform is a character sum over `Z / p^(K+J)`.

use num_complex::Complex64;

use super::{AnalysisError, TestFunction};
use crate::padic::PadicNumber;

/// `f̃(ξ)` at a single point, summing `f(b) χ_p(ξ b) p^(-J)` over cosets with
/// the characters evaluated in exact p-adic arithmetic.
pub fn fourier(f: &TestFunction, xi: &PadicNumber) -> Result<Complex64, AnalysisError> {
    if xi.base() != f.base() {
        return Err(crate::padic::PadicError::BaseMismatch(xi.base().get(), f.base().get()).into());
    }
    let Some(v) = xi.valuation() else {
        return Ok(f.integrate());
    };
    // ∫_{p^J Z_p} χ(ξy) dy vanishes once |ξ| > p^J
    if v < -(f.resolution_exponent() as i64) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let digits = (f.support_exponent() + f.resolution_exponent()) as usize + 2;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, value) in f.values().iter().enumerate() {
        if *value == Complex64::new(0.0, 0.0) {
            continue;
        }
        let b = f.representative_padic(i, digits);
        let prod = xi.checked_mul(&b)?;
        if prod.absolute_precision() < 0 {
            return Err(crate::padic::PadicError::InsufficientPrecision {
                needed: 0,
                available: prod.absolute_precision(),
            }
            .into());
        }
        acc += value * prod.character();
    }
    Ok(acc * f.cell_measure())
}

fn character_sum(f: &TestFunction, sign: f64) -> Result<TestFunction, AnalysisError> {
    let n = f.coset_count();
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, sign * std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let values = f.values();
    let mut out = Vec::with_capacity(n);
    for xi in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut phase = 0usize;
        for v in values {
            acc += v * roots[phase];
            phase += xi;
            if phase >= n {
                phase %= n;
            }
        }
        out.push(acc * f.cell_measure());
    }
    TestFunction::from_values(f.base(), f.resolution_exponent(), f.support_exponent(), out)
}

/// The full transform. The output window swaps the exponents: `K' = J`, `J' = K`.
pub fn fourier_all(f: &TestFunction) -> Result<TestFunction, AnalysisError> {
    character_sum(f, 1.0)
}

/// `f(x) = ∫ f̃(ξ) χ_p(-ξx) dξ`, again swapping the window exponents.
pub fn inverse_fourier_all(g: &TestFunction) -> Result<TestFunction, AnalysisError> {
    character_sum(g, -1.0)
}
