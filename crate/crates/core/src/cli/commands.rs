use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use padic_wavelet::analysis::{kozyrev_wavelet, vladimirov, CwtGrid, GridSpec, KozyrevFrame, ScaleRange, TestFunction};
use padic_wavelet::haar::{
    haar_forward_padic, haar_forward_real, haar_inverse_padic, haar_inverse_real, reconstruction_precision, AnyPyramid,
};
use padic_wavelet::hierarchic::{state_from_padic, LevelWeighting};
use padic_wavelet::padic::{format_rational, simplex_address, PadicNumber, PadicRationalInput, PrimeBase};
use padic_wavelet::qudit::{
    pentabit_encode, run_circuit_observed, Circuit, Instruction, PentabitAlphabet, QuditRegister, RunOptions,
    DEFAULT_AMPLITUDE_CAP,
};
use padic_wavelet::simplex::{area_fraction, Partition};

use super::{
    CliError, CwtArgs, ExpandArgs, HaarArgs, HaarInvArgs, HierDemoArgs, IcwtArgs, KozyrevArgs, Mode, QuditArgs,
    SimplexArgs, AMPLITUDE_CAP_ENV,
};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

/// Writes to `out` when given, stdout otherwise.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Invalid(format!("stdout: {e}")))
        }
    }
}

fn read_fields(path: &Path) -> Result<Vec<String>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        out.extend(record.iter().filter(|f| !f.is_empty()).map(str::to_owned));
    }
    Ok(out)
}

fn rational(text: &str) -> Result<PadicRationalInput, CliError> {
    Ok(text.parse::<PadicRationalInput>()?)
}

pub fn expand(a: &ExpandArgs) -> Result<(), CliError> {
    let base = PrimeBase::new(a.p)?;
    let q = rational(&a.rational)?;
    let x = PadicNumber::from_rational(&q, base, a.precision)?;
    let mut s = String::new();
    s.push_str(&format!(
        "x = {} in Q_{}, {} digits\n",
        format_rational(&q.to_rational()),
        a.p,
        a.precision
    ));
    match x.valuation() {
        Some(v) => s.push_str(&format!("valuation: {v}\n")),
        None => s.push_str("valuation: inf\n"),
    }
    let digits: Vec<String> = x.digits().iter().map(u32::to_string).collect();
    s.push_str(&format!("digits: [{}]\n", digits.join(", ")));
    s.push_str(&format!("expansion: {x}\n"));
    s.push_str(&format!("norm: {}\n", format_rational(&x.norm())));
    s.push_str(&format!("fractional part: {}\n", format_rational(&x.frac_part())));
    emit(None, &s)
}

pub fn haar(a: &HaarArgs) -> Result<(), CliError> {
    let fields = read_fields(&a.input)?;
    let len = fields.len();
    let depth = match a.depth {
        Some(d) => d,
        None if len.is_power_of_two() => len.trailing_zeros() as usize,
        None => {
            return Err(CliError::Invalid(format!("signal length {len} is not a power of two")));
        }
    };
    let pyramid = match a.mode {
        Mode::Real => {
            let signal = fields
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| CliError::Invalid(format!("invalid sample {f:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            AnyPyramid::Real(haar_forward_real(&signal, depth)?)
        }
        Mode::Padic => {
            let base = PrimeBase::new(a.p)?;
            let signal = fields
                .iter()
                .map(|f| Ok(PadicNumber::from_rational(&rational(f)?, base, a.precision)?))
                .collect::<Result<Vec<_>, CliError>>()?;
            AnyPyramid::Padic(base, haar_forward_padic(&signal, depth)?)
        }
    };
    emit(a.out.as_deref(), &(pyramid.to_json() + "\n"))
}

pub fn haar_inv(a: &HaarInvArgs) -> Result<(), CliError> {
    let pyramid = AnyPyramid::from_json(&read(&a.input)?)?;
    let lines: Vec<String> = match &pyramid {
        AnyPyramid::Real(p) => haar_inverse_real(p)?.iter().map(f64::to_string).collect(),
        AnyPyramid::Padic(_, p) => {
            eprintln!("reconstruction known modulo p^{}", reconstruction_precision(p)?);
            haar_inverse_padic(p)?.iter().map(PadicNumber::to_string).collect()
        }
    };
    emit(a.out.as_deref(), &(lines.join("\n") + "\n"))
}

pub fn kozyrev(a: &KozyrevArgs) -> Result<(), CliError> {
    let base = PrimeBase::new(a.p)?;
    let psi = kozyrev_wavelet(base).refine(a.support, a.resolution)?;
    let d = vladimirov(&psi, a.alpha)?;
    let lambda = (a.p as f64).powf(a.alpha);
    let expected = psi.scale(Complex64::new(lambda, 0.0));
    let residual = d.max_abs_diff(&expected)? / psi.max_abs();
    let s = format!(
        "p = {}, alpha = {}, window K = {}, J = {}\neigenvalue p^alpha = {lambda}\nmax |D^alpha psi - p^alpha psi| / max |psi| = {residual:e}\n",
        a.p, a.alpha, a.support, a.resolution
    );
    emit(None, &s)
}

pub fn cwt(a: &CwtArgs) -> Result<(), CliError> {
    let f = TestFunction::from_json(&read(&a.input)?)?;
    let spec = GridSpec {
        scales: ScaleRange::new(a.jmin, a.jmax)?,
        resolution: a.resolution,
    };
    let frame = KozyrevFrame::new(f.base());
    let grid = frame.forward(&f, &spec)?;
    let energy = f.norm2();
    let grid_energy = frame.plancherel(&grid);
    let rel = if energy > 0.0 {
        (grid_energy - energy).abs() / energy
    } else {
        grid_energy.abs()
    };
    eprintln!("plancherel: |f|^2 = {energy:e}, grid = {grid_energy:e}, relative difference = {rel:e}");
    emit(a.out.as_deref(), &(grid.to_json() + "\n"))
}

pub fn icwt(a: &IcwtArgs) -> Result<(), CliError> {
    let grid = CwtGrid::from_json(&read(&a.input)?)?;
    let frame = KozyrevFrame::new(grid.base());
    let f = frame.inverse(&grid)?;
    if let Some(path) = &a.reference {
        let reference = TestFunction::from_json(&read(path)?)?
            .refine(f.support_exponent(), f.resolution_exponent())
            .map_err(|_| CliError::Invalid("reference window is larger than the reconstruction window".into()))?;
        let diff = TestFunction::lin_comb(Complex64::new(1.0, 0.0), &f, Complex64::new(-1.0, 0.0), &reference)?;
        let norm = reference.norm2();
        let err = if norm > 0.0 { (diff.norm2() / norm).sqrt() } else { diff.norm2().sqrt() };
        eprintln!("relative L2 error = {err:e}");
    }
    emit(a.out.as_deref(), &(f.to_json() + "\n"))
}

pub fn hier_demo(a: &HierDemoArgs) -> Result<(), CliError> {
    let base = PrimeBase::new(a.p)?;
    let x = PadicNumber::from_rational(&rational(&a.x)?, base, a.precision)?;
    let y = PadicNumber::from_rational(&rational(&a.y)?, base, a.precision)?;
    let sx = state_from_padic(&x, a.depth, a.dim)?;
    let sy = state_from_padic(&y, a.depth, a.dim)?;
    let shape = sx.shape();
    let path = |v: &PadicNumber| -> Result<String, CliError> {
        let digits: Vec<String> = simplex_address(v, a.depth)?.iter().map(u32::to_string).collect();
        Ok(digits.join(" "))
    };
    let mut s = format!(
        "tree: p = {}, depth {}, {} components per node, {} nodes\n",
        a.p,
        a.depth,
        a.dim,
        shape.node_count()
    );
    s.push_str(&format!("x = {}: path {}\n", a.x, path(&x)?));
    s.push_str(&format!("y = {}: path {}\n", a.y, path(&y)?));
    for (name, w) in [("flat", LevelWeighting::Flat), ("measure", LevelWeighting::Measure)] {
        let xy = sx.inner(&sy, w)?;
        s.push_str(&format!(
            "{name}: <x|x> = {}, <y|y> = {}, <x|y> = {}\n",
            sx.norm2(w),
            sy.norm2(w),
            xy.re
        ));
        let levels: Vec<String> = sx.level_norms(w).iter().map(|v| v.to_string()).collect();
        s.push_str(&format!("{name} level norms of x: [{}]\n", levels.join(", ")));
    }
    if let Some(out) = &a.out {
        emit(Some(out), &(sx.to_json() + "\n"))?;
    }
    emit(None, &s)
}

fn amplitude_cap() -> Result<usize, CliError> {
    match std::env::var(AMPLITUDE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("{AMPLITUDE_CAP_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_AMPLITUDE_CAP),
    }
}

pub fn qudit(a: &QuditArgs) -> Result<(), CliError> {
    let cap = amplitude_cap()?;
    let mut circuit: Circuit = read(&a.input)?.parse()?;
    if let Some(seed) = a.seed {
        for ins in &mut circuit.instructions {
            if let Instruction::Measure { seed: s, .. } = ins {
                *s = seed;
            }
        }
    }
    let initial = match &a.dna {
        Some(seq) => {
            if a.p.is_some_and(|p| p != 5) {
                return Err(CliError::Invalid("nucleotide input needs p = 5".into()));
            }
            pentabit_encode(seq, &PentabitAlphabet::default(), cap)?
        }
        None => {
            let p = a.p.unwrap_or(2);
            match &a.init {
                Some(text) => {
                    let digits = text
                        .split(',')
                        .map(|d| {
                            d.trim()
                                .parse::<u32>()
                                .map_err(|_| CliError::Invalid(format!("invalid digit {d:?}")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    QuditRegister::basis(p, &digits, cap)?
                }
                None => QuditRegister::zero_state(p, a.qudits, cap)?,
            }
        }
    };
    let options = RunOptions {
        renormalize: a.renormalize,
    };
    let report = run_circuit_observed(&circuit, &initial, options, |w| eprintln!("warning: {w}"))?;
    if let Some(path) = &a.dump {
        emit(Some(path), &(report.state.to_json() + "\n"))?;
    }
    emit(a.out.as_deref(), &(report.to_json() + "\n"))
}

pub fn simplex(a: &SimplexArgs) -> Result<(), CliError> {
    let highlight = a
        .highlight
        .as_deref()
        .map(|text| {
            text.split(',')
                .filter(|d| !d.trim().is_empty())
                .map(|d| {
                    d.trim()
                        .parse::<u32>()
                        .map_err(|_| CliError::Invalid(format!("invalid digit {d:?}")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let part = Partition::new(a.p, a.depth)?;
    if part.is_fallback() {
        eprintln!("notice: no simplex picture for p = {}; drawing the interval partition", a.p);
    }
    let svg = part.to_svg(highlight.as_deref())?;
    if let Some(h) = &highlight {
        eprintln!("highlighted cell area fraction = {}", area_fraction(a.p, h)?);
    }
    emit(a.out.as_deref(), &svg)
}
