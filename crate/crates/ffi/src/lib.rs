//! C interface to `padic-wavelet`.
//!
//! Every fallible function returns a [`PwStatus`]. On failure the message is
//! available from [`pw_last_error`] on the same thread. Handles are opaque and
//! owned by the caller, who releases them with the matching `*_free` function.
//! Panics are caught at the boundary and reported as `PW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use padic_wavelet::analysis::{kozyrev_wavelet, vladimirov, AnalysisError};
use padic_wavelet::haar::{haar_forward_real, haar_inverse_real, HaarError, Pyramid};
use padic_wavelet::padic::{PadicError, PadicNumber, PadicRationalInput, PrimeBase};
use padic_wavelet::qudit::{
    hadamard, measure, qft, uf_gate, HadamardVariant, ModPFunction, QuditError, QuditRegister, DEFAULT_AMPLITUDE_CAP,
};
use padic_wavelet::simplex::{Partition, SimplexError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A numeric precondition failed: unnormalized state, exhausted precision
    /// or insufficient resolution.
    Numeric = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Hadamard gate choice for [`pw_qudit_hadamard`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PwHadamard {
    /// Phases `ω^(xy)`; unitary for every p.
    Fourier = 0,
    /// Signs `(-1)^(xy mod p)`; unitary only for p = 2.
    Sign = 1,
}

/// A p-adic number at fixed precision.
pub struct PwPadic(PadicNumber);

/// A register of qudits. Amplitudes are indexed big-endian.
pub struct PwQudit(QuditRegister);

struct Failure(PwStatus, String);

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Self {
        let status = match e {
            PadicError::InsufficientPrecision { .. } => PwStatus::Numeric,
            _ => PwStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let status = match e {
            AnalysisError::InsufficientResolution { .. } => PwStatus::Numeric,
            _ => PwStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<HaarError> for Failure {
    fn from(e: HaarError) -> Self {
        let status = match e {
            HaarError::PrecisionExhausted { .. } => PwStatus::Numeric,
            _ => PwStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<QuditError> for Failure {
    fn from(e: QuditError) -> Self {
        let status = match e {
            QuditError::Unnormalized(_) => PwStatus::Numeric,
            _ => PwStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<SimplexError> for Failure {
    fn from(e: SimplexError) -> Self {
        Failure(PwStatus::InvalidArgument, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PwStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PwStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            PwStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(PwStatus::NullPointer, "null pointer argument".into())
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(PwStatus::InvalidArgument, msg.into())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(null)
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `numerator / denominator` in Q_p with `precision` significant digits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_from_rational(
    numerator: i64,
    denominator: i64,
    p: u32,
    precision: usize,
    out: *mut *mut PwPadic,
) -> PwStatus {
    guard(|| {
        let out = deref_mut(out)?;
        let q = PadicRationalInput::new(numerator, denominator)?;
        let x = PadicNumber::from_rational(&q, PrimeBase::new(p)?, precision)?;
        *out = Box::into_raw(Box::new(PwPadic(x)));
        Ok(())
    })
}

/// Parses the display form, e.g. `…2 1 . 0 (base 3, val -1)`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_parse(text: *const c_char, out: *mut *mut PwPadic) -> PwStatus {
    guard(|| {
        let out = deref_mut(out)?;
        if text.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| invalid(e.to_string()))?;
        let x: PadicNumber = s.parse()?;
        *out = Box::into_raw(Box::new(PwPadic(x)));
        Ok(())
    })
}

/// Releases a p-adic handle. NULL is ignored.
///
/// # Safety
/// `x` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_free(x: *mut PwPadic) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
}

unsafe fn binary(a: *const PwPadic, b: *const PwPadic, out: *mut *mut PwPadic, op: BinOp) -> PwStatus {
    guard(|| {
        let (a, b, out) = (deref(a)?, deref(b)?, deref_mut(out)?);
        let r = match op {
            BinOp::Add => a.0.checked_add(&b.0)?,
            BinOp::Sub => a.0.checked_sub(&b.0)?,
            BinOp::Mul => a.0.checked_mul(&b.0)?,
        };
        *out = Box::into_raw(Box::new(PwPadic(r)));
        Ok(())
    })
}

/// `a + b` with precision `min(P(a), P(b))`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_add(a: *const PwPadic, b: *const PwPadic, out: *mut *mut PwPadic) -> PwStatus {
    binary(a, b, out, BinOp::Add)
}

/// `a - b`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_sub(a: *const PwPadic, b: *const PwPadic, out: *mut *mut PwPadic) -> PwStatus {
    binary(a, b, out, BinOp::Sub)
}

/// `a · b`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_mul(a: *const PwPadic, b: *const PwPadic, out: *mut *mut PwPadic) -> PwStatus {
    binary(a, b, out, BinOp::Mul)
}

/// Valuation `ord_p(x)`; `INT64_MAX` for zero.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_valuation(x: *const PwPadic, out: *mut i64) -> PwStatus {
    guard(|| {
        *deref_mut(out)? = deref(x)?.0.valuation().unwrap_or(i64::MAX);
        Ok(())
    })
}

/// Absolute precision: the number is known modulo `p^out`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_absolute_precision(x: *const PwPadic, out: *mut i64) -> PwStatus {
    guard(|| {
        *deref_mut(out)? = deref(x)?.0.absolute_precision();
        Ok(())
    })
}

/// Norm `|x|_p` as a double.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_norm(x: *const PwPadic, out: *mut f64) -> PwStatus {
    guard(|| {
        *deref_mut(out)? = deref(x)?.0.norm_f64();
        Ok(())
    })
}

/// Additive character `exp(2πi {x}_p)`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_character(x: *const PwPadic, re: *mut f64, im: *mut f64) -> PwStatus {
    guard(|| {
        let c = deref(x)?.0.character();
        *deref_mut(re)? = c.re;
        *deref_mut(im)? = c.im;
        Ok(())
    })
}

/// Display form of `x`. Release with [`pw_string_free`].
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_padic_to_string(x: *const PwPadic, out: *mut *mut c_char) -> PwStatus {
    guard(|| {
        *deref_mut(out)? = to_c_string(deref(x)?.0.to_string());
        Ok(())
    })
}

/// Real Haar pyramid of `len` samples over `depth` levels. `out` receives `len`
/// values: the coarse level, then the detail levels finest first.
///
/// # Safety
/// `signal` and `out` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pw_haar_forward(signal: *const f64, len: usize, depth: usize, out: *mut f64) -> PwStatus {
    guard(|| {
        let signal = slice(signal, len)?;
        let out = slice_mut(out, len)?;
        let pyr = haar_forward_real(signal, depth)?;
        let flat: Vec<f64> = pyr.coarse.iter().chain(pyr.details.iter().flatten()).copied().collect();
        out.copy_from_slice(&flat);
        Ok(())
    })
}

/// Inverse of [`pw_haar_forward`] with the same layout.
///
/// # Safety
/// `coefficients` and `out` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pw_haar_inverse(coefficients: *const f64, len: usize, depth: usize, out: *mut f64) -> PwStatus {
    guard(|| {
        let coeffs = slice(coefficients, len)?;
        let out = slice_mut(out, len)?;
        if depth >= usize::BITS as usize || len == 0 || !len.is_multiple_of(1 << depth) {
            return Err(invalid(format!("length {len} is not a multiple of 2^{depth}")));
        }
        let mut rest = coeffs;
        let (coarse, tail) = rest.split_at(len >> depth);
        rest = tail;
        let mut details = Vec::with_capacity(depth);
        for level in 1..=depth {
            let (d, tail) = rest.split_at(len >> level);
            details.push(d.to_vec());
            rest = tail;
        }
        let signal = haar_inverse_real(&Pyramid { coarse: coarse.to_vec(), details })?;
        out.copy_from_slice(&signal);
        Ok(())
    })
}

/// Relative residual `max |D^α ψ - p^α ψ| / max |ψ|` of the Kozyrev wavelet on
/// the window of support exponent `support` and resolution `resolution`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pw_kozyrev_residual(p: u32, alpha: f64, support: i32, resolution: i32, out: *mut f64) -> PwStatus {
    guard(|| {
        let out = deref_mut(out)?;
        let psi = kozyrev_wavelet(PrimeBase::new(p)?).refine(support, resolution)?;
        let d = vladimirov(&psi, alpha)?;
        let lambda = (p as f64).powf(alpha);
        let worst = psi
            .values()
            .iter()
            .zip(d.values())
            .map(|(v, dv)| (dv - v * lambda).norm())
            .fold(0.0, f64::max);
        *out = worst / psi.max_abs();
        Ok(())
    })
}

/// Basis register `|digits⟩` of `n` qudits with `p` levels, most significant
/// digit first. `digits` may be NULL for `|0…0⟩`.
///
/// # Safety
/// `digits` must be NULL or point to `n` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_new(p: u32, n: usize, digits: *const u32, out: *mut *mut PwQudit) -> PwStatus {
    guard(|| {
        let out = deref_mut(out)?;
        let reg = if digits.is_null() {
            QuditRegister::zero_state(p, n, DEFAULT_AMPLITUDE_CAP)?
        } else {
            QuditRegister::basis(p, slice(digits, n)?, DEFAULT_AMPLITUDE_CAP)?
        };
        *out = Box::into_raw(Box::new(PwQudit(reg)));
        Ok(())
    })
}

/// Releases a register handle. NULL is ignored.
///
/// # Safety
/// `reg` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_free(reg: *mut PwQudit) {
    if !reg.is_null() {
        drop(Box::from_raw(reg));
    }
}

/// Number of amplitudes `p^n`, or 0 for NULL.
///
/// # Safety
/// `reg` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_len(reg: *const PwQudit) -> usize {
    reg.as_ref().map_or(0, |r| r.0.amplitudes().len())
}

/// Squared norm of the register.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_squared_norm(reg: *const PwQudit, out: *mut f64) -> PwStatus {
    guard(|| {
        *deref_mut(out)? = deref(reg)?.0.squared_norm();
        Ok(())
    })
}

/// Applies a Hadamard gate to qudit `pos` in place.
///
/// # Safety
/// `reg` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_hadamard(reg: *mut PwQudit, pos: usize, variant: PwHadamard) -> PwStatus {
    guard(|| {
        let reg = deref_mut(reg)?;
        let variant = match variant {
            PwHadamard::Fourier => HadamardVariant::Fourier,
            PwHadamard::Sign => HadamardVariant::Sign,
        };
        let h = hadamard(reg.0.levels(), variant)?;
        reg.0 = reg.0.apply_single(&h, pos)?;
        Ok(())
    })
}

/// `|x⟩|s⟩ ↦ |x⟩|s + f(x)⟩` on qudits `xpos` and `spos`, with `f` given by a
/// table of `p` values.
///
/// # Safety
/// `reg` must be valid and `table` must point to `table_len` values.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_uf(
    reg: *mut PwQudit,
    xpos: usize,
    spos: usize,
    table: *const u32,
    table_len: usize,
) -> PwStatus {
    guard(|| {
        let reg = deref_mut(reg)?;
        let f = ModPFunction::new(reg.0.levels(), slice(table, table_len)?.to_vec())?;
        reg.0 = reg.0.apply_pair(&uf_gate(&f), xpos, spos)?;
        Ok(())
    })
}

/// Quantum Fourier transform on the whole register, in place.
///
/// # Safety
/// `reg` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_qft(reg: *mut PwQudit) -> PwStatus {
    guard(|| {
        let reg = deref_mut(reg)?;
        reg.0 = qft(&reg.0);
        Ok(())
    })
}

/// Copies the amplitudes into `re` and `im`, each of capacity `len`.
///
/// # Safety
/// `re` and `im` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_amplitudes(reg: *const PwQudit, re: *mut f64, im: *mut f64, len: usize) -> PwStatus {
    guard(|| {
        let amps: &[Complex64] = deref(reg)?.0.amplitudes();
        if len < amps.len() {
            return Err(Failure(
                PwStatus::BufferTooSmall,
                format!("{} amplitudes do not fit in {len}", amps.len()),
            ));
        }
        let (re, im) = (slice_mut(re, len)?, slice_mut(im, len)?);
        for (i, a) in amps.iter().enumerate() {
            re[i] = a.re;
            im[i] = a.im;
        }
        Ok(())
    })
}

/// Samples `shots` computational-basis outcomes with a seeded generator and
/// writes the count of each basis index into `counts` (capacity `len`). The
/// register is left unchanged.
///
/// # Safety
/// `counts` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn pw_qudit_measure(
    reg: *const PwQudit,
    shots: u64,
    seed: u64,
    counts: *mut u64,
    len: usize,
) -> PwStatus {
    guard(|| {
        let reg = deref(reg)?;
        let size = reg.0.amplitudes().len();
        if len < size {
            return Err(Failure(PwStatus::BufferTooSmall, format!("{size} outcomes do not fit in {len}")));
        }
        let hist = measure(&reg.0, shots, seed)?;
        let counts = slice_mut(counts, len)?;
        counts.fill(0);
        for (k, v) in hist.counts {
            counts[k] = v;
        }
        Ok(())
    })
}

/// SVG of the depth-`depth` partition for `branching`, optionally highlighting
/// the cell with the given address. Release with [`pw_string_free`].
///
/// # Safety
/// `highlight` must be NULL or point to `highlight_len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pw_simplex_svg(
    branching: u32,
    depth: usize,
    highlight: *const u32,
    highlight_len: usize,
    out: *mut *mut c_char,
) -> PwStatus {
    guard(|| {
        let out = deref_mut(out)?;
        let address = if highlight.is_null() { None } else { Some(slice(highlight, highlight_len)?) };
        let svg = Partition::new(branching, depth)?.to_svg(address)?;
        *out = to_c_string(svg);
        Ok(())
    })
}
