use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use padic_wavelet::padic::{PadicNumber, PadicRationalInput, PrimeBase};
use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-wavelet"))
        .args(args)
        .env_remove("PADIC_AMPLITUDE_CAP")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_golden(args: &[&str], name: &str) {
    let expected = std::fs::read_to_string(golden(name)).unwrap();
    assert_eq!(ok(args), expected, "{name}");
}

#[test]
fn expand_goldens() {
    assert_golden(&["expand", "12", "--p", "2", "--precision", "4"], "expand_12_p2.txt");
    assert_golden(&["expand", "-1", "--p", "3", "--precision", "5"], "expand_minus1_p3.txt");
    assert_golden(&["expand", "0", "--p", "5", "--precision", "3"], "expand_zero_p5.txt");
    assert_golden(&["expand", "1/3", "--p", "2", "--precision", "8"], "expand_third_p2.txt");
}

#[test]
fn expand_content() {
    let twelve = ok(&["expand", "12", "--p", "2", "--precision", "4"]);
    assert!(twelve.contains("valuation: 2\n"));
    assert!(twelve.contains("digits: [1, 1, 0, 0]\n"));
    assert!(twelve.contains("norm: 1/4\n"));
    let minus_one = ok(&["expand", "-1", "--p", "3", "--precision", "5"]);
    assert!(minus_one.contains("digits: [2, 2, 2, 2, 2]\n"));
    assert!(ok(&["expand", "0", "--p", "5"]).contains("norm: 0/1\n"));
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        &["expand", "1/0", "--p", "2"][..],
        &["expand", "3", "--p", "6"],
        &["expand", "3"],
        &["kozyrev", "--p", "2", "--alpha", "0"],
        &["kozyrev", "--p", "2", "--alpha", "-1"],
        &["simplex", "--p", "4", "--depth", "1", "--highlight", "4"],
        &["simplex", "--p", "1"],
        &["haar", "--in", "/nonexistent.csv"],
        &["bogus"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn haar_roundtrip_on_bundled_signal() {
    let dir = tempfile::tempdir().unwrap();
    let pyr = dir.path().join("pyr.json");
    let signal_path = golden("signal_1024.csv");
    ok(&["haar", "--in", signal_path.to_str().unwrap(), "--out", pyr.to_str().unwrap()]);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&pyr).unwrap()).unwrap();
    assert_eq!(json["J"], 10);
    let back = ok(&["haar-inv", "--in", pyr.to_str().unwrap()]);
    let original: Vec<f64> = std::fs::read_to_string(&signal_path)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    let restored: Vec<f64> = back.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(original.len(), 1024);
    assert_eq!(restored.len(), 1024);
    let worst = original.iter().zip(&restored).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn haar_small_golden_and_constant_signal() {
    let small = golden("small.csv");
    assert_golden(&["haar", "--in", small.to_str().unwrap()], "haar_small.json");

    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.csv");
    std::fs::write(&flat, "2.5\n".repeat(16)).unwrap();
    let json: Value = serde_json::from_str(&ok(&["haar", "--in", flat.to_str().unwrap()])).unwrap();
    assert_eq!(json["coarse"][0], 2.5);
    for level in json["details"].as_array().unwrap() {
        assert!(level.as_array().unwrap().iter().all(|v| v.as_f64() == Some(0.0)));
    }

    let odd = dir.path().join("odd.csv");
    std::fs::write(&odd, "1,2,3").unwrap();
    assert_eq!(run(&["haar", "--in", odd.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn haar_padic_roundtrip_is_digit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("q.csv");
    let samples = ["1", "-2", "1/3", "7", "0", "-5/4", "9", "2/9"];
    std::fs::write(&input, samples.join(",")).unwrap();
    let pyr = dir.path().join("pyr.json");
    ok(&[
        "haar",
        "--in",
        input.to_str().unwrap(),
        "--mode",
        "padic",
        "--p",
        "3",
        "--precision",
        "10",
        "--out",
        pyr.to_str().unwrap(),
    ]);
    let out = run(&["haar-inv", "--in", pyr.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("reconstruction known modulo p^"));
    let base = PrimeBase::new(3).unwrap();
    for (line, s) in String::from_utf8(out.stdout).unwrap().lines().zip(samples) {
        let got: PadicNumber = line.parse().unwrap();
        let q: PadicRationalInput = s.parse().unwrap();
        let want = PadicNumber::from_rational(&q, base, 40).unwrap();
        assert!(got.absolute_precision() >= 7, "{line}");
        assert_eq!(got, want.reduce_precision(got.absolute_precision()), "{s}");
    }
}

fn residual(out: &str) -> f64 {
    out.lines()
        .find_map(|l| l.split_once("max |psi| = ").map(|(_, v)| v.trim().parse().unwrap()))
        .unwrap()
}

#[test]
fn kozyrev_reports_eigenrelation() {
    let a = ok(&["kozyrev", "--p", "2", "--alpha", "1"]);
    assert!(a.contains("eigenvalue p^alpha = 2\n"));
    assert!(residual(&a) < 1e-9);
    let b = ok(&["kozyrev", "--p", "3", "--alpha", "0.5", "-K", "2", "-J", "2"]);
    assert!(residual(&b) < 1e-9);
}

fn test_function_json() -> String {
    // mean zero on every ball of radius 1, so every scale from -4 to 4 is captured
    r#"{"p": 2, "K": 1, "J": 2, "entries": [
        {"digits": "0 0 1", "re": 1.0, "im": 0.0},
        {"digits": "1 0 1", "re": -1.0, "im": 0.5},
        {"digits": "0 1 0", "re": 2.0, "im": 0.0},
        {"digits": "1 1 0", "re": -2.0, "im": 0.0},
        {"digits": "0 1 1", "re": 0.25, "im": 0.0},
        {"digits": "1 1 1", "re": -0.25, "im": -0.5}
    ]}"#
    .to_string()
}

fn reported(text: &str, key: &str) -> f64 {
    let start = text.find(key).unwrap() + key.len();
    let rest = &text[start..];
    let end = rest.find([',', '\n']).unwrap_or(rest.len());
    rest[..end].trim().parse().unwrap()
}

#[test]
fn cwt_roundtrip_and_plancherel_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, test_function_json()).unwrap();
    let grid = dir.path().join("grid.json");
    let out = run(&[
        "cwt",
        "--in",
        f.to_str().unwrap(),
        "--jmin",
        "-4",
        "--jmax",
        "4",
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(reported(&stderr(&out), "relative difference = ") < 1e-6);
    let back = run(&["icwt", "--in", grid.to_str().unwrap(), "--reference", f.to_str().unwrap()]);
    assert!(back.status.success());
    assert!(reported(&stderr(&back), "relative L2 error = ") < 1e-6);
    let json: Value = serde_json::from_slice(&back.stdout).unwrap();
    assert_eq!(json["p"], 2);
}

#[test]
fn cwt_of_zero_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("zero.json");
    std::fs::write(&f, r#"{"p": 3, "K": 1, "J": 1, "entries": []}"#).unwrap();
    let grid: Value = serde_json::from_str(&ok(&["cwt", "--in", f.to_str().unwrap(), "--jmin", "-2", "--jmax", "2"])).unwrap();
    for block in grid["scales"].as_array().unwrap() {
        for key in ["re", "im"] {
            assert!(block[key].as_array().unwrap().iter().all(|v| v.as_f64() == Some(0.0)));
        }
    }
    let out = run(&["cwt", "--in", f.to_str().unwrap(), "--jmin", "2", "--jmax", "-2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hier_demo_golden() {
    assert_golden(&["hier-demo"], "hier_demo.txt");
    let out = ok(&["hier-demo", "--p", "2", "--depth", "2", "--x", "1", "--y", "2"]);
    assert!(out.contains("flat: <x|x> = 2, <y|y> = 2, <x|y> = 0\n"));
}

#[test]
fn qudit_bell_pair() {
    let circuit = golden("bell.circuit");
    assert_golden(&["qudit", "--in", circuit.to_str().unwrap(), "--qudits", "2"], "qudit_bell.json");
}

#[test]
fn qudit_uniform_histogram() {
    let circuit = golden("h_measure.circuit");
    let json: Value = serde_json::from_str(&ok(&["qudit", "--in", circuit.to_str().unwrap()])).unwrap();
    let counts = &json["histograms"][0]["counts"];
    let (zero, one) = (counts["0"].as_f64().unwrap(), counts["1"].as_f64().unwrap());
    assert_eq!(zero + one, 4000.0);
    // 4σ for a fair binomial of 4000 draws
    assert!((zero - 2000.0).abs() < 4.0 * 1000f64.sqrt());
    let again = ok(&["qudit", "--in", circuit.to_str().unwrap()]);
    assert_eq!(serde_json::from_str::<Value>(&again).unwrap(), json);
    let reseeded = ok(&["qudit", "--in", circuit.to_str().unwrap(), "--seed", "77"]);
    assert_eq!(reseeded, ok(&["qudit", "--in", circuit.to_str().unwrap(), "--seed", "77"]));
}

#[test]
fn qudit_sign_hadamard_warns() {
    let circuit = golden("sign_h_p3.circuit");
    let path = circuit.to_str().unwrap();
    let fail = run(&["qudit", "--in", path, "--p", "3"]);
    assert_eq!(fail.status.code(), Some(3));
    assert!(stderr(&fail).contains("not unitary"));
    assert!(stderr(&fail).contains("not normalized"));
    let out = run(&["qudit", "--in", path, "--p", "3", "--renormalize"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning: step 1: Hadamard for p = 3 is not unitary"));
    let expected = std::fs::read_to_string(golden("qudit_sign_h_p3.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn qudit_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.circuit");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let dump = dir.path().join("state.json");
    let e = empty.to_str().unwrap();
    ok(&["qudit", "--in", e, "--dna", "AG", "--dump", dump.to_str().unwrap()]);
    let amps: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    let amps = amps.as_array().unwrap();
    assert_eq!(amps.len(), 25);
    assert_eq!(amps[5 + 4]["re"], 1.0);
    assert_eq!(run(&["qudit", "--in", e, "--dna", "AXG"]).status.code(), Some(2));
    assert_eq!(run(&["qudit", "--in", e, "--dna", "A", "--p", "3"]).status.code(), Some(2));
    ok(&["qudit", "--in", e, "--p", "3", "--init", "2,1", "--dump", dump.to_str().unwrap()]);
    let amps: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_eq!(amps[7]["re"], 1.0);

    let capped = Command::new(env!("CARGO_BIN_EXE_padic-wavelet"))
        .args(["qudit", "--in", e, "--p", "2", "--qudits", "5"])
        .env("PADIC_AMPLITUDE_CAP", "16")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(stderr(&capped).contains("exceed the cap of 16"));
    let bad = Command::new(env!("CARGO_BIN_EXE_padic-wavelet"))
        .args(["qudit", "--in", e])
        .env("PADIC_AMPLITUDE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let broken = dir.path().join("broken.circuit");
    std::fs::write(&broken, "H 0\nSWAP 0 1\n").unwrap();
    let out = run(&["qudit", "--in", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"));
}

fn polygons(svg: &str) -> Vec<(String, String, Vec<(f64, f64)>)> {
    svg.lines()
        .filter(|l| l.starts_with("<polygon"))
        .map(|l| {
            let attr = |name: &str| {
                let key = format!("{name}=\"");
                let start = l.find(&key).unwrap() + key.len();
                l[start..start + l[start..].find('"').unwrap()].to_string()
            };
            let points = attr("points")
                .split(' ')
                .map(|pt| {
                    let (x, y) = pt.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            (attr("class"), attr("data-address"), points)
        })
        .collect()
}

fn shoelace(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| pts[i].0 * pts[(i + 1) % n].1 - pts[(i + 1) % n].0 * pts[i].1)
        .sum::<f64>()
        .abs()
        / 2.0
}

#[test]
fn simplex_goldens() {
    assert_golden(&["simplex", "--p", "4", "--depth", "1"], "simplex_p4_d1.svg");
    assert_golden(&["simplex", "--p", "4", "--depth", "2", "--highlight", "3,0"], "simplex_p4_d2_h30.svg");
    assert_golden(&["simplex", "--p", "2", "--depth", "3", "--highlight", "1,0,1"], "simplex_p2_d3.svg");
    assert_golden(&["simplex", "--p", "4", "--depth", "0"], "simplex_p4_d0.svg");
}

#[test]
fn simplex_geometry() {
    assert_eq!(polygons(&ok(&["simplex", "--p", "4", "--depth", "1"])).len(), 4);
    let root = polygons(&ok(&["simplex", "--p", "4", "--depth", "0"]));
    assert_eq!(root.len(), 1);
    let unit = shoelace(&root[0].2);
    for depth in 1..=3usize {
        let address: Vec<String> = (0..depth).map(|i| ((i * 3 + 1) % 4).to_string()).collect();
        let out = run(&["simplex", "--p", "4", "--depth", &depth.to_string(), "--highlight", &address.join(",")]);
        let cells = polygons(&String::from_utf8_lossy(&out.stdout));
        assert_eq!(cells.len(), 4usize.pow(depth as u32));
        let lit: Vec<_> = cells.iter().filter(|c| c.0 == "highlight").collect();
        assert_eq!(lit.len(), 1);
        assert_eq!(lit[0].1, address.join("."));
        let frac = shoelace(&lit[0].2) / unit;
        assert!((frac - 4f64.powi(-(depth as i32))).abs() < 1e-9);
        assert!(stderr(&out).contains("area fraction"));
    }
    let fallback = run(&["simplex", "--p", "5", "--depth", "1"]);
    assert!(fallback.status.success());
    assert!(stderr(&fallback).contains("notice"));
}
