//! Continuous wavelet transform over the p-adic affine group with the Kozyrev
//! wavelet.
//!
//! A group element is `(a, b)` with `a = u p^j`, `u ∈ {1, …, p-1}` the leading
//! digit of the scale, and `b ∈ Q_p`. The atom `ψ((x - b)/a)` is supported on
//! `b + p^j Z_p` and equals `exp(2πi k (x_j - b_j)/p)` there, where `k = u^(-1)
//! mod p` and `x_j` is the digit of `x` at exponent `j`. It is therefore
//! constant on cells `(u p^j + p^(j+1) Z_p) × (b + p^(j+1) Z_p)` of the group,
//! and both transforms are finite sums over such cells:
//!
//! * forward `W(a, b) = |a|_p^(-1) ∫ conj(ψ((x - b)/a)) f(x) dx`,
//! * inverse `f(x) = C_ψ^(-1) Σ ψ((x - b)/a) W(a, b) Δμ` with the left
//!   invariant weight `Δμ = da db / |a|_p^2` of a cell.
//!
//! The scale sum is truncated to `j_min ..= j_max`. A zero-mean function
//! supported in `{|x| <= p^K}` and constant on `p^J`-cosets is reconstructed
//! exactly when `j_min <= -K` and `J <= j_max + 1`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::test_function::coset_count;
use super::vladimirov::residue_sums;
use super::{kozyrev_atom, kozyrev_wavelet, AnalysisError, TestFunction};
use crate::padic::{PadicError, PadicNumber, PadicRationalInput, PrimeBase};

/// Inclusive range of scale exponents `j`, `a = u p^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleRange {
    pub jmin: i32,
    pub jmax: i32,
}

impl Default for ScaleRange {
    fn default() -> Self {
        ScaleRange { jmin: -4, jmax: 4 }
    }
}

impl ScaleRange {
    pub fn new(jmin: i32, jmax: i32) -> Result<Self, AnalysisError> {
        if jmin > jmax {
            return Err(AnalysisError::EmptyGrid);
        }
        Ok(ScaleRange { jmin, jmax })
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.jmin..=self.jmax
    }
}

/// Scale range plus an optional working resolution. Without one, the
/// coarsest resolution that resolves every atom and the input is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GridSpec {
    pub scales: ScaleRange,
    pub resolution: Option<i32>,
}

/// Coefficients at one scale `a = unit · p^j`.
///
/// Translations run over `b ∈ p^floor Z_p / p^(j+1) Z_p` with
/// `floor = min(j, -K)`; other `b` give zero. Coefficient `i` belongs to the
/// `b` whose digits at exponents `floor ..= j` are the base-p digits of `i`,
/// lowest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleBlock {
    pub j: i32,
    pub unit: u32,
    pub floor: i32,
    pub coefficients: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CwtGrid {
    base: PrimeBase,
    support: i32,
    resolution: i32,
    scales: ScaleRange,
    blocks: Vec<ScaleBlock>,
}

fn twist(unit: u32, p: u32) -> usize {
    (1..p).find(|k| (k * unit) % p == 1).expect("unit is invertible mod p") as usize
}

fn roots(p: usize) -> Vec<Complex64> {
    (0..p)
        .map(|t| Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / p as f64))
        .collect()
}

/// Invariant weight `da db / |a|_p^2` of a group cell at scale exponent `j`:
/// `da = db = p^(-j-1)`, `|a|_p = p^(-j)`.
pub fn cell_weight(base: PrimeBase, j: i32) -> f64 {
    let p = base.as_f64();
    let da = p.powi(-j - 1);
    let db = p.powi(-j - 1);
    let abs_a = p.powi(-j);
    da * db / (abs_a * abs_a)
}

impl CwtGrid {
    /// A grid of zeros matching a function window and scale range.
    pub fn zeros(base: PrimeBase, support: i32, resolution: i32, scales: ScaleRange) -> Result<Self, AnalysisError> {
        if resolution < scales.jmax + 1 {
            return Err(AnalysisError::InsufficientResolution {
                needed: scales.jmax + 1,
                got: resolution,
            });
        }
        coset_count(base, support, resolution)?;
        let p = base.get();
        let mut blocks = Vec::new();
        for j in scales.iter() {
            let floor = j.min(-support);
            let count = (p as usize).pow((j - floor + 1) as u32);
            for unit in 1..p {
                blocks.push(ScaleBlock {
                    j,
                    unit,
                    floor,
                    coefficients: vec![Complex64::new(0.0, 0.0); count],
                });
            }
        }
        Ok(CwtGrid {
            base,
            support,
            resolution,
            scales,
            blocks,
        })
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    /// `K` of the analysed function.
    pub fn support_exponent(&self) -> i32 {
        self.support
    }

    /// Working resolution `R`; reconstructions are constant on `p^R`-cosets.
    pub fn resolution_exponent(&self) -> i32 {
        self.resolution
    }

    pub fn scales(&self) -> ScaleRange {
        self.scales
    }

    pub fn blocks(&self) -> &[ScaleBlock] {
        &self.blocks
    }

    pub fn block(&self, j: i32, unit: u32) -> Option<&ScaleBlock> {
        self.blocks.iter().find(|b| b.j == j && b.unit == unit)
    }

    /// `W(unit · p^j, b)` for an arbitrary translation `b`.
    pub fn coefficient(&self, j: i32, unit: u32, b: &PadicNumber) -> Result<Complex64, AnalysisError> {
        let block = self.block(j, unit).ok_or_else(|| {
            AnalysisError::ShapeMismatch(format!("scale {unit}·p^{j} is not on the grid"))
        })?;
        if b.base() != self.base {
            return Err(PadicError::BaseMismatch(b.base().get(), self.base.get()).into());
        }
        if b.valuation().is_some_and(|v| v < block.floor as i64) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let p = self.base.get() as usize;
        let mut index = 0usize;
        for e in (block.floor..=j).rev() {
            let d = b.digit_at(e as i64).ok_or(PadicError::InsufficientPrecision {
                needed: j as i64 + 1,
                available: b.absolute_precision(),
            })?;
            index = index * p + d as usize;
        }
        Ok(block.coefficients[index])
    }

    /// `Σ |W|^2 |a|_p Δμ`, which equals `C_ψ ‖f‖^2` for band-limited input.
    pub fn plancherel_sum(&self) -> f64 {
        let p = self.base.as_f64();
        self.blocks
            .iter()
            .map(|b| {
                let energy: f64 = b.coefficients.iter().map(|c| c.norm_sqr()).sum();
                energy * p.powi(-b.j) * cell_weight(self.base, b.j)
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.coefficients.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GridFile::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, AnalysisError> {
        let file: GridFile = serde_json::from_str(s).map_err(|e| AnalysisError::Json(e.to_string()))?;
        file.try_into()
    }
}

/// Forward transform of `f` with the Kozyrev wavelet.
pub fn cwt_forward(f: &TestFunction, spec: &GridSpec) -> Result<CwtGrid, AnalysisError> {
    let scales = ScaleRange::new(spec.scales.jmin, spec.scales.jmax)?;
    let k = f.support_exponent();
    let needed = (scales.jmax + 1).max(f.resolution_exponent());
    let resolution = match spec.resolution {
        Some(r) if r < needed => return Err(AnalysisError::InsufficientResolution { needed, got: r }),
        Some(r) => r,
        None => needed,
    };
    let g = f.refine(k, resolution)?;
    let mut grid = CwtGrid::zeros(f.base(), k, resolution, scales)?;

    let p = f.base().get() as usize;
    let pf = p as f64;
    let sums = residue_sums(g.values(), p, (k + resolution) as usize);
    let cell = g.cell_measure();
    let total = sums[0][0] * cell;
    let w = roots(p);

    for block in &mut grid.blocks {
        let j = block.j;
        let tw = twist(block.unit, p as u32);
        let scale = pf.powi(j);
        if j < -k {
            // the atom's ball contains the whole support, on which x_j = 0
            for (bj, c) in block.coefficients.iter_mut().enumerate() {
                *c = w[(tw * bj) % p] * total * scale;
            }
            continue;
        }
        let r = (j + k) as usize;
        let width = p.pow(r as u32);
        let level = &sums[r + 1];
        for (i, c) in block.coefficients.iter_mut().enumerate() {
            let low = i % width;
            let bj = i / width;
            let mut acc = Complex64::new(0.0, 0.0);
            for d in 0..p {
                acc += w[(tw * (bj + p - d)) % p] * level[low + d * width];
            }
            *c = acc * cell * scale;
        }
    }
    Ok(grid)
}

/// Inverse transform. The result lives on the window `(K, R)` of the grid.
pub fn cwt_inverse(grid: &CwtGrid, c_psi: f64) -> Result<TestFunction, AnalysisError> {
    if !(c_psi.is_finite() && c_psi > 0.0) {
        return Err(AnalysisError::InvalidAdmissibility(c_psi));
    }
    if grid.blocks.is_empty() {
        return Err(AnalysisError::EmptyGrid);
    }
    let k = grid.support;
    let p = grid.base.get() as usize;
    let w = roots(p);
    let mut out = vec![Complex64::new(0.0, 0.0); coset_count(grid.base, k, grid.resolution)?];

    for block in &grid.blocks {
        let j = block.j;
        let tw = twist(block.unit, p as u32);
        let weight = cell_weight(grid.base, j) / c_psi;
        if j < -k {
            let mut acc = Complex64::new(0.0, 0.0);
            for (d, c) in block.coefficients.iter().enumerate() {
                acc += w[(tw * (p - d)) % p] * c;
            }
            for v in out.iter_mut() {
                *v += acc * weight;
            }
            continue;
        }
        let width = p.pow((j + k) as u32);
        for (x, v) in out.iter_mut().enumerate() {
            let low = x % width;
            let xj = (x / width) % p;
            let mut acc = Complex64::new(0.0, 0.0);
            for d in 0..p {
                acc += w[(tw * (xj + p - d)) % p] * block.coefficients[low + d * width];
            }
            *v += acc * weight;
        }
    }
    TestFunction::from_values(grid.base, k, grid.resolution, out)
}

fn padic_from_digits(base: PrimeBase, floor: i32, digits: &[u32], precision: usize) -> PadicNumber {
    let p = base.get() as i64;
    let mut num: i64 = 0;
    for &d in digits.iter().rev() {
        num = num * p + d as i64;
    }
    let input = if floor >= 0 {
        PadicRationalInput::integer(num * p.pow(floor as u32))
    } else {
        PadicRationalInput::new(num, p.pow(floor.unsigned_abs())).expect("nonzero")
    };
    PadicNumber::from_rational(&input, base, precision).expect("valid precision")
}

/// `C_ψ` for the Kozyrev wavelet, obtained from the Plancherel sum of `ψ`
/// itself with every coefficient computed by direct quadrature of the atoms
/// in p-adic arithmetic. Scales outside `-1 ..= 1` do not see `ψ`.
fn admissibility_by_quadrature(base: PrimeBase) -> f64 {
    let p = base.get() as usize;
    let resolution = 2;
    let psi = kozyrev_wavelet(base).refine(0, resolution).expect("small window");
    let xs: Vec<PadicNumber> = (0..psi.coset_count()).map(|i| psi.representative_padic(i, 6)).collect();
    let cell = psi.cell_measure();
    let mut sum = 0.0;
    for j in -1..=1i32 {
        let floor = j.min(0);
        let width = (j - floor + 1) as usize;
        let mut digits = vec![0u32; width];
        for cell_index in 0..p.pow(width as u32) {
            let mut t = cell_index;
            for d in digits.iter_mut() {
                *d = (t % p) as u32;
                t /= p;
            }
            let b = padic_from_digits(base, floor, &digits, 6);
            for unit in 1..p as u32 {
                let mut w = Complex64::new(0.0, 0.0);
                for (x, fx) in xs.iter().zip(psi.values()) {
                    let atom = kozyrev_atom(j, unit, &b, x).expect("representatives carry enough digits");
                    w += atom.conj() * fx;
                }
                let w = w * cell * base.as_f64().powi(j);
                sum += w.norm_sqr() * base.as_f64().powi(-j) * cell_weight(base, j);
            }
        }
    }
    sum / psi.norm2()
}

/// Admissibility constant of the Kozyrev wavelet, computed once per prime.
pub fn admissibility_constant(base: PrimeBase) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("cache lock").get(&base.get()) {
        return *c;
    }
    let c = admissibility_by_quadrature(base);
    cache.lock().expect("cache lock").insert(base.get(), c);
    c
}

/// The Kozyrev wavelet frame for one prime, carrying its admissibility constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KozyrevFrame {
    base: PrimeBase,
    admissibility: f64,
}

impl KozyrevFrame {
    pub fn new(base: PrimeBase) -> Self {
        KozyrevFrame {
            base,
            admissibility: admissibility_constant(base),
        }
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn admissibility(&self) -> f64 {
        self.admissibility
    }

    pub fn forward(&self, f: &TestFunction, spec: &GridSpec) -> Result<CwtGrid, AnalysisError> {
        if f.base() != self.base {
            return Err(PadicError::BaseMismatch(f.base().get(), self.base.get()).into());
        }
        cwt_forward(f, spec)
    }

    pub fn inverse(&self, grid: &CwtGrid) -> Result<TestFunction, AnalysisError> {
        cwt_inverse(grid, self.admissibility)
    }

    /// `Σ |W|^2 |a|_p Δμ / C_ψ`, to be compared with `‖f‖^2`.
    pub fn plancherel(&self, grid: &CwtGrid) -> f64 {
        grid.plancherel_sum() / self.admissibility
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BlockFile {
    j: i32,
    unit: u32,
    floor: i32,
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GridFile {
    p: u32,
    #[serde(rename = "K")]
    support: i32,
    resolution: i32,
    jmin: i32,
    jmax: i32,
    scales: Vec<BlockFile>,
}

impl From<&CwtGrid> for GridFile {
    fn from(g: &CwtGrid) -> Self {
        GridFile {
            p: g.base.get(),
            support: g.support,
            resolution: g.resolution,
            jmin: g.scales.jmin,
            jmax: g.scales.jmax,
            scales: g
                .blocks
                .iter()
                .map(|b| BlockFile {
                    j: b.j,
                    unit: b.unit,
                    floor: b.floor,
                    re: b.coefficients.iter().map(|c| c.re).collect(),
                    im: b.coefficients.iter().map(|c| c.im).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<GridFile> for CwtGrid {
    type Error = AnalysisError;

    fn try_from(file: GridFile) -> Result<Self, Self::Error> {
        let base = PrimeBase::new(file.p)?;
        let scales = ScaleRange::new(file.jmin, file.jmax)?;
        let mut grid = CwtGrid::zeros(base, file.support, file.resolution, scales)?;
        if file.scales.len() != grid.blocks.len() {
            return Err(AnalysisError::Json(format!(
                "expected {} scale blocks, got {}",
                grid.blocks.len(),
                file.scales.len()
            )));
        }
        for (slot, b) in grid.blocks.iter_mut().zip(file.scales) {
            if (b.j, b.unit, b.floor) != (slot.j, slot.unit, slot.floor) {
                return Err(AnalysisError::Json(format!(
                    "block (j={}, unit={}, floor={}) out of order; expected (j={}, unit={}, floor={})",
                    b.j, b.unit, b.floor, slot.j, slot.unit, slot.floor
                )));
            }
            if b.re.len() != slot.coefficients.len() || b.im.len() != slot.coefficients.len() {
                return Err(AnalysisError::Json(format!(
                    "block j={} unit={} needs {} coefficients",
                    b.j,
                    b.unit,
                    slot.coefficients.len()
                )));
            }
            for (c, (re, im)) in slot.coefficients.iter_mut().zip(b.re.into_iter().zip(b.im)) {
                *c = Complex64::new(re, im);
            }
        }
        Ok(grid)
    }
}
