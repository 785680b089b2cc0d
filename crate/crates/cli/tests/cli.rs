use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use primeconv_cli::io::{parse_samples, Samples};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_primeconv"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn real_values(text: &str) -> Vec<f64> {
    match parse_samples(text).unwrap() {
        Samples::Real(s) => s.into_vec(),
        Samples::Complex(_) => panic!("expected real samples"),
    }
}

fn assert_close(got: &[f64], want: &[f64]) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!(
            (g - w).abs() <= 1e-12 * w.abs().max(1.0),
            "{got:?} vs {want:?}"
        );
    }
}

#[test]
fn convolve_golden_pair() {
    let input = golden("input.txt");
    let kernel = golden("kernel.txt");
    for engine in ["direct", "fast-prime", "winograd-two-factor"] {
        let o = run(&[
            "convolve",
            "--input",
            input.to_str().unwrap(),
            "--kernel",
            kernel.to_str().unwrap(),
            "--engine",
            engine,
        ]);
        assert!(o.status.success());
        assert_close(&real_values(&stdout(&o)), &[31.0, 31.0, 28.0]);
    }
}

#[test]
fn convolve_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.txt");
    let o = run(&[
        "convolve",
        "--input",
        golden("input.txt").to_str().unwrap(),
        "--kernel",
        golden("kernel.txt").to_str().unwrap(),
        "--linear",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_close(
        &real_values(&fs::read_to_string(&out).unwrap()),
        &[4.0, 13.0, 28.0],
    );
}

#[test]
fn delta_kernel_echoes_complex_input() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.txt");
    let d = dir.path().join("d.txt");
    fs::write(&x, "0.25 -1\n3 0.5\n-2 2\n1 0\n7 -7\n").unwrap();
    fs::write(&d, "1\n0\n0\n0\n0\n").unwrap();
    let o = run(&[
        "convolve",
        "--input",
        x.to_str().unwrap(),
        "--kernel",
        d.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let Samples::Complex(got) = parse_samples(&stdout(&o)).unwrap() else {
        panic!("expected complex output")
    };
    let Samples::Complex(want) = parse_samples(&fs::read_to_string(&x).unwrap()).unwrap() else {
        unreachable!()
    };
    for (g, w) in got.iter().zip(want.iter()) {
        assert!((g - w).norm() < 1e-12);
    }
}

#[test]
fn length_mismatch_names_both_lengths() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("s.txt");
    fs::write(&short, "1\n2\n").unwrap();
    let o = run(&[
        "convolve",
        "--input",
        short.to_str().unwrap(),
        "--kernel",
        golden("kernel.txt").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("2 samples") && err.contains("3"), "{err}");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1\nnot-a-number\n").unwrap();
    let four = dir.path().join("four.txt");
    fs::write(&four, "1\n2\n3\n4\n").unwrap();
    let b = bad.to_str().unwrap();
    let f = four.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["convolve", "--input", b, "--kernel", b],
        vec!["convolve", "--input", f, "--kernel", f, "--require-prime"],
        vec!["dft", "--input", f],
        vec!["table", "--engine", "fft"],
        vec!["table", "--sizes", "0"],
        vec!["verify", "--trials", "0"],
        vec!["verify", "--tol", "-1"],
        vec!["bench", "--trials", "2"],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn dft_of_delta_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.txt");
    fs::write(&x, "1\n0\n0\n").unwrap();
    let o = run(&["dft", "--input", x.to_str().unwrap(), "--engine", "direct"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 0\n1 0\n1 0\n");
}

#[test]
fn table_csv_matches_golden() {
    let o = run(&[
        "table",
        "--sizes",
        "2,3,5,7,17",
        "--engine",
        "direct,fast-prime",
        "--trials",
        "10",
        "--no-timing",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), fs::read_to_string(golden("table.csv")).unwrap());
}

#[test]
fn table_json_is_deterministic_and_parses() {
    let args = [
        "table",
        "--sizes",
        "3,11",
        "--no-timing",
        "--format",
        "json",
        "--seed",
        "7",
    ];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    let rows: serde_json::Value = serde_json::from_str(&a).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let direct11 = rows
        .iter()
        .find(|r| r["n"] == 11 && r["engine"] == "direct")
        .unwrap();
    assert_eq!(direct11["mults_measured"], 121);
    assert_eq!(direct11["adds_measured"], 110);
}

#[test]
fn verify_fault_exits_one() {
    let o = run(&[
        "verify",
        "--sizes",
        "5,7",
        "--trials",
        "5",
        "--inject-fault",
        "1e-3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("| oracle-equivalence-real | FAIL |"));
}

#[test]
fn verify_zero_tolerance_keeps_counts_green() {
    let o = run(&[
        "verify", "--sizes", "5", "--trials", "3", "--tol", "0", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("count-exactness,PASS"));
    assert!(text.contains("oracle-equivalence-real,FAIL"));
}

#[test]
fn verify_small_config_passes_and_repeats() {
    let args = [
        "verify", "--sizes", "2-6,11", "--trials", "10", "--seed", "3",
    ];
    let a = run(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, run(&args).stdout);
}
