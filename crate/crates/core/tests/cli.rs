//! End-to-end tests of the `kstab` binary: exit codes, stream separation,
//! and file outputs.

use std::path::Path;
use std::process::Command;

fn kstab(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_kstab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn verify_paper_reports_and_exits_one() {
    let (stdout, _, code) = kstab(&["verify-paper"]);
    // the weighted endpoint closed form is not an identity of its
    // quadrature assembly; everything else passes
    assert_eq!(code, 1);
    assert_eq!(stdout.matches("\nPASS ").count() + usize::from(stdout.starts_with("PASS ")), 9);
    assert!(stdout.contains("identity checks: 8"));
    assert!(stdout.contains("FAIL closed form of weighted endpoint term"));
    assert!(stdout.contains("b^2 + a^2"));
}

#[test]
fn check_exit_codes() {
    let (stdout, _, code) = kstab(&["check", "1", "3", "3"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("verdict: KStable"));

    let (stdout, _, code) = kstab(&["check", "0", "1", "1"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("verdict: NotAmple"));

    let (stdout, _, code) = kstab(&["check", "2", "2", "5"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("ample: no"));

    // malformed arguments are clap usage errors
    let (_, _, code) = kstab(&["check", "one", "3", "3"]);
    assert_eq!(code, 2);
    let (_, _, code) = kstab(&["check", "1", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn check_approx_flag_is_labeled() {
    let (stdout, _, code) = kstab(&["check", "1", "3", "3", "--approx"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("non-authoritative"));
}

#[test]
fn scan_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let (stdout, _, code) = kstab(&["scan", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("rows: 45"));
    assert!(stdout.contains("minimum C = "));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,b,C");
    assert_eq!(lines.len(), 46);
    // every cell is a canonical fraction that round-trips
    for line in &lines[1..] {
        for cell in line.split(',') {
            let parsed: kstab::ratpoly::Rational = cell.parse().unwrap();
            assert_eq!(parsed.to_string(), cell);
        }
    }
}

#[test]
fn scan_rejects_unwritable_path_and_small_n() {
    let (_, stderr, code) = kstab(&["scan", "10", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("usage error"));

    let (_, stderr, code) = kstab(&["scan", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("n >= 2"));
}

#[test]
fn certify_writes_replayable_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("certs.json");
    let (stdout, _, code) = kstab(&[
        "certify",
        "--delta",
        "1/10",
        "--max-depth",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("overall: Certified"));
    assert!(Path::new(&path).exists());
    let reports = kstab::certify::replay_certificate_file(&path).unwrap();
    assert_eq!(reports.len(), 2);
}

#[test]
fn certify_usage_errors_exit_two() {
    let (_, stderr, code) = kstab(&["certify", "--delta", "1/2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("empty shrunken triangle"));

    let (_, stderr, code) = kstab(&["certify", "--delta", "0"]);
    assert_eq!(code, 2, "{stderr}");

    let (_, _, code) = kstab(&["certify", "--delta", "q"]);
    assert_eq!(code, 2);
}

#[test]
fn certify_depth_zero_still_certifies() {
    // the root-cell Bernstein expansion of C over the shrunken triangles is
    // already all-positive, so even with no subdivision allowed the run
    // certifies
    let (_, stderr, code) = kstab(&["certify", "--delta", "1/100", "--max-depth", "0"]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stderr.contains("overall: Certified"));
}

#[test]
fn expand_writes_file_and_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let (_, _, code) = kstab(&["expand", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# C(a,b): 28 terms"));
    assert!(text.contains("1/4 b^4"));
    assert!(!text.contains('.'), "exact output must not contain decimals");
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let (_, _, code) = kstab(&["frobnicate"]);
    assert_eq!(code, 2);
}
