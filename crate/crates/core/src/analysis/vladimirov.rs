use num_complex::Complex64;

use super::{AnalysisError, TestFunction};

/// Sums of `values` over residue classes: `level[r][c] = Σ_{B ≡ c mod p^r} values[B]`
/// for `r = 0..=n`, where `values.len() = p^n`.
pub(crate) fn residue_sums(values: &[Complex64], p: usize, n: usize) -> Vec<Vec<Complex64>> {
    let mut levels = vec![Vec::new(); n + 1];
    levels[n] = values.to_vec();
    for r in (0..n).rev() {
        let width = p.pow(r as u32);
        let finer = &levels[r + 1];
        let mut coarse = vec![Complex64::new(0.0, 0.0); width];
        for (c, v) in finer.iter().enumerate() {
            coarse[c % width] += v;
        }
        levels[r] = coarse;
    }
    levels
}

/// The Vladimirov operator
/// `D^α f(x) = (p^α - 1)/(1 - p^(-1-α)) ∫ (f(x) - f(y)) / |x - y|_p^(1+α) dy`.
///
/// Around each coset representative `x` the integral splits over spheres
/// `|y - x|_p = p^m`. Spheres with `m <= -J` lie inside the coset of `x` and
/// contribute nothing; spheres with `-J < m <= K` are summed exactly from ball
/// integrals of `f`; spheres with `m > K` lie outside the support, where
/// `f(y) = 0`, and their geometric series is summed in closed form.
///
/// The result is returned on the same window. `D^α f` need not vanish outside
/// `{|x|_p <= p^K}`; those values are not represented.
pub fn vladimirov(f: &TestFunction, alpha: f64) -> Result<TestFunction, AnalysisError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(AnalysisError::InvalidAlpha(alpha));
    }
    let p = f.base().get() as usize;
    let pf = p as f64;
    let k = f.support_exponent();
    let j = f.resolution_exponent();
    let n = (k + j) as usize;
    let cell = f.cell_measure();
    let sums = residue_sums(f.values(), p, n);

    let constant = (pf.powf(alpha) - 1.0) / (1.0 - pf.powf(-1.0 - alpha));
    let shell = 1.0 - 1.0 / pf;
    let tail = shell * pf.powf(-(k as f64 + 1.0) * alpha) / (1.0 - pf.powf(-alpha));

    let out: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(x, &fx)| {
            // ball(m) = ∫_{|y-x| <= p^m} f, indexed by r = K - m
            let ball = |m: i32| -> Complex64 {
                let r = (k - m) as usize;
                sums[r][x % p.pow(r as u32)] * cell
            };
            let mut acc = fx * tail;
            for m in (-j + 1)..=k {
                let sphere = pf.powi(m) * shell;
                let integral = fx * sphere - (ball(m) - ball(m - 1));
                acc += integral * pf.powf(-(m as f64) * (1.0 + alpha));
            }
            acc * constant
        })
        .collect();
    TestFunction::from_values(f.base(), k, j, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::kozyrev_wavelet;
    use crate::padic::PrimeBase;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base(p: u32) -> PrimeBase {
        PrimeBase::new(p).unwrap()
    }

    /// Brute force over pairs of cosets: `|x - y|_p` is constant for `y` in a
    /// coset other than that of `x`, equal to `p^(-e)` with `e` the lowest
    /// exponent where the representatives differ. The region outside the
    /// support is summed shell by shell up to `extra` shells, then dropped.
    fn brute_force(f: &TestFunction, alpha: f64, extra: i32) -> Vec<Complex64> {
        let p = f.base().get() as usize;
        let pf = p as f64;
        let k = f.support_exponent();
        let cell = f.cell_measure();
        let c = (pf.powf(alpha) - 1.0) / (1.0 - pf.powf(-1.0 - alpha));
        (0..f.coset_count())
            .map(|x| {
                let dx = f.coset_digits(x);
                let fx = f.values()[x];
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..f.coset_count() {
                    if y == x {
                        continue;
                    }
                    let dy = f.coset_digits(y);
                    let first = dx.iter().zip(&dy).position(|(a, b)| a != b).unwrap() as i32;
                    let e = first - k;
                    let dist = pf.powi(-e);
                    acc += (fx - f.values()[y]) * cell / dist.powf(1.0 + alpha);
                }
                for m in (k + 1)..=(k + extra) {
                    acc += fx * pf.powi(m) * (1.0 - 1.0 / pf) / pf.powf(m as f64 * (1.0 + alpha));
                }
                acc * c
            })
            .collect()
    }

    #[test]
    fn kozyrev_is_an_eigenfunction() {
        for p in [2, 3, 5] {
            for alpha in [0.5, 1.0, 2.0] {
                let psi = kozyrev_wavelet(base(p)).refine(2, 2).unwrap();
                let d = vladimirov(&psi, alpha).unwrap();
                let expected = psi.scale(Complex64::new((p as f64).powf(alpha), 0.0));
                assert!(d.max_abs_diff(&expected).unwrap() < 1e-9, "p={p} α={alpha}");
            }
        }
    }

    #[test]
    fn dilated_wavelet_has_unit_eigenvalue() {
        // ψ(p x): support |x| <= p, constant on cosets of Z_p
        let b = base(2);
        let dilated = TestFunction::from_fn(b, 1, 4, |d| if d[0] == 1 { -1.0 } else { 1.0 }.into()).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            let d = vladimirov(&dilated, alpha).unwrap();
            assert!(d.max_abs_diff(&dilated).unwrap() < 1e-9);
            let brute = brute_force(&dilated, alpha, 200);
            for (a, b) in d.values().iter().zip(&brute) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn matches_pairwise_oracle_on_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, k, j) in [(2, 2, 2), (3, 1, 2), (5, 1, 1)] {
            let f = TestFunction::from_fn(base(p), k, j, |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
            .unwrap();
            for alpha in [0.5, 1.5] {
                let d = vladimirov(&f, alpha).unwrap();
                let brute = brute_force(&f, alpha, 400);
                for (a, b) in d.values().iter().zip(&brute) {
                    assert!((a - b).norm() < 1e-9, "p={p} α={alpha}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn zero_maps_to_zero_and_alpha_is_checked() {
        let z = TestFunction::zeros(base(3), 1, 1).unwrap();
        assert_eq!(vladimirov(&z, 1.0).unwrap(), z);
        assert!(matches!(vladimirov(&z, 0.0), Err(AnalysisError::InvalidAlpha(_))));
        assert!(vladimirov(&z, -1.0).is_err());
        assert!(vladimirov(&z, f64::NAN).is_err());
    }
}
