use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const FIG1: &str = "\
prepare q1 @0
prepare q2 @0 |0>
cnot q1 q2 @0
dilate q1 +1
cnot q1 q2 @1
output q2 @1
";

fn tdesim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdesim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tdesim(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(cell: &str) -> f64 {
    cell.parse().unwrap()
}

fn complex_matrix(v: &Value) -> Vec<Vec<(f64, f64)>> {
    v["matrix"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

#[test]
fn fig2_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = tdesim(&["fig2", "--steps", "101", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let table = rows(&text);
    assert_eq!(table[0], ["beta2", "D_in_paper", "D_in_tracenorm", "D_out"]);
    assert_eq!(table.len(), 102);
    let mid = table.iter().find(|r| r[0] == "0.5").unwrap();
    assert_eq!(num(&mid[1]), 1.0);
    assert_eq!(num(&mid[3]), 1.0);
    for r in &table[1..] {
        let b2 = num(&r[0]);
        assert!((num(&r[3]) - 4.0 * (b2 - b2 * b2)).abs() < 1e-11, "{r:?}");
    }
}

#[test]
fn csv_cells_have_at_most_twelve_significant_digits() {
    let text = stdout(&["fig2", "--steps", "7"]);
    for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let digits: String = cell
            .split('e')
            .next()
            .unwrap()
            .chars()
            .filter(char::is_ascii_digit)
            .collect();
        let significant = digits.trim_start_matches('0');
        assert!(significant.len() <= 12, "{cell}");
    }
}

#[test]
fn fig2_json_is_unrounded() {
    let v: Value = serde_json::from_str(&stdout(&["fig2", "--steps", "3", "--format", "json"])).unwrap();
    let pts = v.as_array().unwrap();
    assert_eq!(pts.len(), 3);
    let tn = pts[1]["D_in_tracenorm"].as_f64().unwrap();
    assert_eq!(tn, std::f64::consts::SQRT_2);
    assert_eq!(pts[1]["D_out"].as_f64().unwrap(), 1.0);
}

#[test]
fn fig3_columns_and_summary() {
    let out = tdesim(&["fig3", "--steps", "11", "--pvac", "0.25"]);
    assert!(out.status.success());
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table[0], ["beta2", "S_in", "S_rho_d", "S_out"]);
    assert_eq!(table.len(), 12);
    for r in &table[1..] {
        assert!(num(&r[1]) <= num(&r[2]) + 1e-9, "{r:?}");
    }
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("every point: true"), "{summary}");
}

#[test]
fn decohere_prints_maximally_mixed_pair() {
    let table = rows(&stdout(&["decohere"]));
    assert_eq!(table[0], ["kind", "label", "re", "im"]);
    let rho: Vec<_> = table.iter().filter(|r| r[0] == "rho").collect();
    assert_eq!(rho.len(), 16);
    for r in rho {
        let diag = r[1].as_bytes()[0] == r[1].as_bytes()[1];
        let expected = if diag { 0.25 } else { 0.0 };
        assert!((num(&r[2]) - expected).abs() < 1e-12 && num(&r[3]).abs() < 1e-12);
    }
    let joint: Vec<_> = table.iter().filter(|r| r[0] == "joint").collect();
    assert_eq!(joint.len(), 4);
    for r in joint {
        assert!((num(&r[2]) - 0.25).abs() < 1e-12);
    }
}

#[test]
fn nosignal_diagonal_json() {
    let v: Value = serde_json::from_str(&stdout(&["nosignal", "--basis", "diagonal", "--format", "json"]))
        .unwrap();
    assert_eq!(v["basis"], "diagonal");
    let outcomes = v["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2);
    for o in outcomes {
        let m = complex_matrix(&o["rho_out"]);
        let expected = [[0.5, 0.0], [0.0, 0.5]];
        for r in 0..2 {
            for c in 0..2 {
                assert!((m[r][c].0 - expected[r][c]).abs() < 1e-12);
                assert!(m[r][c].1.abs() < 1e-12);
            }
        }
    }
    assert!(v["max_pairwise_distance"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn nosignal_computational_csv() {
    let table = rows(&stdout(&["nosignal"]));
    assert_eq!(table.len(), 5);
    for r in &table[1..] {
        assert!((num(&r[2]) - 0.5).abs() < 1e-12 && (num(&r[3]) - 0.5).abs() < 1e-12);
    }
}

#[test]
fn circuit_file_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.circ");
    fs::write(&path, FIG1).unwrap();
    let text = stdout(&["circuit", path.to_str().unwrap(), "--beta-sq", "0.25", "--format", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    for key in ["input", "rho_s", "rho_d", "rho_out", "entropies"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let out = complex_matrix(&v["rho_out"]);
    assert!((out[0][0].0 - 0.625).abs() < 1e-12);
    assert!((out[1][1].0 - 0.375).abs() < 1e-12);
    assert_eq!(v["rho_out"]["slots"][0]["site"], "q2");
    assert_eq!(v["input"]["prepared"].as_array().unwrap().len(), 2);
    assert!(v["entropies"]["rho_out"].as_f64().unwrap() > 0.9);
}

#[test]
fn circuit_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.circ");
    fs::write(&path, FIG1).unwrap();
    let args = ["circuit", path.to_str().unwrap(), "--alpha-sq", "0.6", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
    let sweep = ["sweep", "--steps", "21", "--tau", "2"];
    assert_eq!(stdout(&sweep), stdout(&sweep));
}

#[test]
fn parse_errors_exit_nonzero_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.circ");
    fs::write(&path, "prepare q1 @0\ncnot q1 q3 @0\noutput q1 @0\n").unwrap();
    let out = tdesim(&["circuit", path.to_str().unwrap(), "--beta-sq", "0.5"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("q3"), "{err}");

    fs::write(&path, "").unwrap();
    let out = tdesim(&["circuit", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("missing output directive"));
}

#[test]
fn flag_validation() {
    for args in [
        &["fig2", "--steps", "1"][..],
        &["fig3", "--pvac", "1.5"],
        &["reverse", "--beta-sq", "-0.1"],
        &["reverse", "--beta-sq", "0.2", "--alpha-sq", "0.8"],
        &["nosignal", "--basis", "polar"],
        &["decohere", "--tau", "0"],
        &["fig2", "--tolerance", "0"],
        &["fig2", "--format", "xml"],
        &["circuit", "/nonexistent/prog.circ"],
    ] {
        let out = tdesim(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty(), "{args:?} should explain");
    }
}

#[test]
fn reverse_and_propriety() {
    let table = rows(&stdout(&["reverse", "--beta-sq", "0.3", "--tau", "2"]));
    assert!((num(&table[1][1]) - 1.0).abs() < 1e-12);
    let table = rows(&stdout(&["propriety"]));
    assert_eq!(table[1][0], "computational");
    assert!((num(&table[1][1]) - 1.0).abs() < 1e-12);
    let table = rows(&stdout(&["propriety", "--basis", "diagonal"]));
    assert!(num(&table[1][1]).abs() < 1e-12);
}

#[test]
fn sweep_matches_closed_form() {
    let table = rows(&stdout(&["sweep", "--steps", "11"]));
    assert_eq!(table[0], ["beta2", "p0", "p1", "S_out"]);
    for r in &table[1..] {
        let b2 = num(&r[0]);
        let a2 = 1.0 - b2;
        assert!((num(&r[1]) - (a2 * a2 + b2 * b2)).abs() < 1e-11, "{r:?}");
    }
}
