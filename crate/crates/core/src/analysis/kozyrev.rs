use num_bigint::BigInt;
use num_complex::Complex64;

use super::{AnalysisError, TestFunction};
use crate::padic::{PadicNumber, PadicRationalInput, PrimeBase};

/// The Kozyrev wavelet `ψ(x) = χ_p(p^(-1) x) Ω(|x|_p)` as a test function on
/// the window `K = 0`, `J = 1`: `ψ(x) = exp(2πi x_0 / p)` on `Z_p`, zero outside.
pub fn kozyrev_wavelet(base: PrimeBase) -> TestFunction {
    let p = base.as_f64();
    TestFunction::from_fn(base, 0, 1, |d| {
        Complex64::from_polar(1.0, std::f64::consts::TAU * d[0] as f64 / p)
    })
    .expect("window (0, 1) is always valid")
}

/// Evaluates `ψ(x)` straight from its definition in p-adic arithmetic.
/// `x` must be known modulo `p^1` whenever `|x|_p <= 1`.
pub fn kozyrev_value(x: &PadicNumber) -> Result<Complex64, AnalysisError> {
    if x.valuation().is_some_and(|v| v < 0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if x.absolute_precision() < 1 {
        return Err(crate::padic::PadicError::InsufficientPrecision {
            needed: 1,
            available: x.absolute_precision(),
        }
        .into());
    }
    let p = x.base().get() as i64;
    Ok(x.div_by_integer(p)?.character())
}

/// `ψ((x - b) / a)` for the affine-group element `a = unit · p^j`, evaluated
/// in exact p-adic arithmetic.
pub fn kozyrev_atom(j: i32, unit: u32, b: &PadicNumber, x: &PadicNumber) -> Result<Complex64, AnalysisError> {
    let base = x.base();
    let p = BigInt::from(base.get());
    let shift = num_traits::pow(p, j.unsigned_abs() as usize);
    // p^(-j) as an exact rational, carried with enough digits for the product
    let inv_scale = if j >= 0 {
        PadicRationalInput::new(1, shift)?
    } else {
        PadicRationalInput::integer(shift)
    };
    let digits = (x.absolute_precision().max(b.absolute_precision()) + j.unsigned_abs() as i64 + 4) as usize;
    let inv_scale = PadicNumber::from_rational(&inv_scale, base, digits)?;
    let y = x.checked_sub(b)?.checked_mul(&inv_scale)?.div_by_integer(unit as i64)?;
    kozyrev_value(&y)
}
