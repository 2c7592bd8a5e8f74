use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use padic_wavelet_ffi::*;

fn last_error() -> String {
    let p = pw_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn padic(n: i64, d: i64, p: u32, precision: usize) -> *mut PwPadic {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pw_padic_from_rational(n, d, p, precision, &mut out) }, PwStatus::Ok);
    assert!(!out.is_null());
    out
}

fn to_string(x: *const PwPadic) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { pw_padic_to_string(x, &mut s) }, PwStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { pw_string_free(s) };
    text
}

#[test]
fn padic_arithmetic_roundtrip() {
    unsafe {
        let a = padic(1, 3, 2, 10);
        let b = padic(-1, 3, 2, 10);
        let mut sum = ptr::null_mut();
        assert_eq!(pw_padic_add(a, b, &mut sum), PwStatus::Ok);
        let mut v = 0;
        assert_eq!(pw_padic_valuation(sum, &mut v), PwStatus::Ok);
        assert_eq!(v, i64::MAX);

        let twelve = padic(12, 1, 2, 8);
        assert_eq!(pw_padic_valuation(twelve, &mut v), PwStatus::Ok);
        assert_eq!(v, 2);
        let mut n = 0.0;
        assert_eq!(pw_padic_norm(twelve, &mut n), PwStatus::Ok);
        assert_eq!(n, 0.25);

        let text = CString::new(to_string(twelve)).unwrap();
        let mut parsed = ptr::null_mut();
        assert_eq!(pw_padic_parse(text.as_ptr(), &mut parsed), PwStatus::Ok);
        assert_eq!(to_string(parsed), to_string(twelve));

        let mut prod = ptr::null_mut();
        assert_eq!(pw_padic_mul(a, twelve, &mut prod), PwStatus::Ok);
        let mut diff = ptr::null_mut();
        let four = padic(4, 1, 2, 8);
        assert_eq!(pw_padic_sub(prod, four, &mut diff), PwStatus::Ok);
        assert_eq!(pw_padic_valuation(diff, &mut v), PwStatus::Ok);
        assert_eq!(v, i64::MAX);

        for x in [a, b, sum, twelve, parsed, prod, diff, four] {
            pw_padic_free(x);
        }
    }
}

#[test]
fn character_of_one_over_p() {
    let x = padic(1, 5, 5, 6);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { pw_padic_character(x, &mut re, &mut im) }, PwStatus::Ok);
    let t = 2.0 * std::f64::consts::PI / 5.0;
    assert!((re - t.cos()).abs() < 1e-12 && (im - t.sin()).abs() < 1e-12);
    unsafe { pw_padic_free(x) };
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pw_padic_from_rational(1, 0, 3, 4, &mut out) }, PwStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { pw_padic_from_rational(1, 2, 4, 4, &mut out) }, PwStatus::InvalidArgument);
    assert_eq!(unsafe { pw_padic_from_rational(1, 2, 3, 4, ptr::null_mut()) }, PwStatus::NullPointer);
    assert_eq!(last_error(), "null pointer argument");
    let x = padic(1, 1, 3, 4);
    assert!(pw_last_error().is_null());
    unsafe { pw_padic_free(x) };

    let bad = CString::new("12").unwrap();
    assert_eq!(unsafe { pw_padic_parse(bad.as_ptr(), &mut out) }, PwStatus::InvalidArgument);
}

#[test]
fn haar_roundtrip() {
    let signal: Vec<f64> = (0..64).map(|i| ((i * 37 % 11) as f64).sin()).collect();
    let mut coeffs = vec![0.0; 64];
    let mut back = vec![0.0; 64];
    unsafe {
        assert_eq!(pw_haar_forward(signal.as_ptr(), 64, 6, coeffs.as_mut_ptr()), PwStatus::Ok);
        assert_eq!(pw_haar_inverse(coeffs.as_ptr(), 64, 6, back.as_mut_ptr()), PwStatus::Ok);
        assert_eq!(pw_haar_inverse(coeffs.as_ptr(), 64, 7, back.as_mut_ptr()), PwStatus::InvalidArgument);
    }
    for (a, b) in signal.iter().zip(&back) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn kozyrev_eigenrelation() {
    let mut r = 1.0;
    assert_eq!(unsafe { pw_kozyrev_residual(3, 1.5, 2, 2, &mut r) }, PwStatus::Ok);
    assert!(r < 1e-9, "{r}");
    assert_eq!(unsafe { pw_kozyrev_residual(3, 1.5, 0, 0, &mut r) }, PwStatus::InvalidArgument);
}

#[test]
fn bell_pair_measurement() {
    unsafe {
        let mut reg = ptr::null_mut();
        assert_eq!(pw_qudit_new(2, 2, ptr::null(), &mut reg), PwStatus::Ok);
        assert_eq!(pw_qudit_len(reg), 4);
        assert_eq!(pw_qudit_hadamard(reg, 0, PwHadamard::Fourier), PwStatus::Ok);
        let table = [0u32, 1];
        assert_eq!(pw_qudit_uf(reg, 0, 1, table.as_ptr(), 2), PwStatus::Ok);
        let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
        assert_eq!(pw_qudit_amplitudes(reg, re.as_mut_ptr(), im.as_mut_ptr(), 4), PwStatus::Ok);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (got, want) in re.iter().zip([h, 0.0, 0.0, h]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(pw_qudit_amplitudes(reg, re.as_mut_ptr(), im.as_mut_ptr(), 3), PwStatus::BufferTooSmall);
        let mut counts = [0u64; 4];
        assert_eq!(pw_qudit_measure(reg, 1000, 7, counts.as_mut_ptr(), 4), PwStatus::Ok);
        assert_eq!(counts[1] + counts[2], 0);
        assert_eq!(counts[0] + counts[3], 1000);
        pw_qudit_free(reg);
    }
}

#[test]
fn sign_hadamard_blocks_measurement() {
    unsafe {
        let mut reg = ptr::null_mut();
        assert_eq!(pw_qudit_new(3, 1, ptr::null(), &mut reg), PwStatus::Ok);
        assert_eq!(pw_qudit_hadamard(reg, 0, PwHadamard::Sign), PwStatus::Ok);
        assert_eq!(pw_qudit_hadamard(reg, 0, PwHadamard::Sign), PwStatus::Ok);
        let mut n = 0.0;
        assert_eq!(pw_qudit_squared_norm(reg, &mut n), PwStatus::Ok);
        assert!((n - 11.0 / 9.0).abs() < 1e-12, "{n}");
        let mut counts = [0u64; 3];
        assert_eq!(pw_qudit_measure(reg, 10, 1, counts.as_mut_ptr(), 3), PwStatus::Numeric);
        assert!(last_error().contains("not normalized"));
        pw_qudit_free(reg);
    }
}

#[test]
fn qft_fourth_power_is_identity() {
    unsafe {
        let digits = [1u32, 2];
        let mut reg = ptr::null_mut();
        assert_eq!(pw_qudit_new(3, 2, digits.as_ptr(), &mut reg), PwStatus::Ok);
        for _ in 0..4 {
            assert_eq!(pw_qudit_qft(reg), PwStatus::Ok);
        }
        let (mut re, mut im) = ([0.0; 9], [0.0; 9]);
        assert_eq!(pw_qudit_amplitudes(reg, re.as_mut_ptr(), im.as_mut_ptr(), 9), PwStatus::Ok);
        for i in 0..9 {
            let want = if i == 5 { 1.0 } else { 0.0 };
            assert!((re[i] - want).abs() < 1e-9 && im[i].abs() < 1e-9);
        }
        pw_qudit_free(reg);
    }
}

#[test]
fn simplex_svg() {
    let address = [0u32, 3];
    let mut svg = ptr::null_mut();
    assert_eq!(unsafe { pw_simplex_svg(4, 2, address.as_ptr(), 2, &mut svg) }, PwStatus::Ok);
    let text = unsafe { CStr::from_ptr(svg) }.to_string_lossy().into_owned();
    unsafe { pw_string_free(svg) };
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polygon").count(), 16);
    assert_eq!(text.matches("class=\"highlight\"").count(), 1);
    assert_eq!(unsafe { pw_simplex_svg(1, 2, ptr::null(), 0, &mut svg) }, PwStatus::InvalidArgument);
}

#[test]
fn null_handles_are_safe() {
    unsafe {
        pw_padic_free(ptr::null_mut());
        pw_qudit_free(ptr::null_mut());
        pw_string_free(ptr::null_mut());
        assert_eq!(pw_qudit_len(ptr::null()), 0);
        assert_eq!(pw_qudit_qft(ptr::null_mut()), PwStatus::NullPointer);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/padic_wavelet.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["pw_last_error", "pw_padic_from_rational", "pw_qudit_measure", "pw_simplex_svg", "PW_STATUS_NUMERIC"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"padic_wavelet.h\"\nint main(void) { PwPadic *x = 0; return pw_padic_from_rational(1, 3, 2, 8, &x) == PW_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
