use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use jacobi_core::report::VerificationReport;

fn jacobi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn assert_golden(args: &[&str], name: &str) {
    let out = jacobi(args);
    assert_eq!(stdout(&out), golden(name), "jacobi {}", args.join(" "));
}

#[test]
fn bracket_of_positions_on_the_mass_shell() {
    let out = jacobi(&["bracket", "mass-shell", "x0", "x1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(x0*p1 - x1*p0)/m^2");
    assert_golden(&["bracket", "mass-shell", "x0", "x1"], "bracket_mass_shell_x0_x1.txt");
}

#[test]
fn momenta_commute() {
    let out = jacobi(&["bracket", "mass-shell", "p0", "p3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn specialized_mass() {
    let out = jacobi(&["bracket", "mass-shell", "x0", "x2", "--specialize", "m=1"]);
    assert_eq!(stdout(&out).trim(), "x0*p2 - x2*p0");
}

#[test]
fn volume_modes_agree_with_the_pair_in_standard_mode() {
    let direct = stdout(&jacobi(&["bracket", "mass-shell", "x1", "x3"]));
    let standard = stdout(&jacobi(&["bracket", "mass-shell", "x1", "x3", "--mode", "standard"]));
    assert_eq!(direct, standard);
}

#[test]
fn tables_match_golden_files() {
    assert_golden(&["table", "mass-shell"], "table_mass_shell.txt");
    assert_golden(&["table", "two-point"], "table_two_point.txt");
    assert_golden(&["table", "lagrangian"], "table_lagrangian.txt");
}

#[test]
fn verify_reports_match_golden_files() {
    assert_golden(&["verify", "operator"], "verify_operator.txt");
    assert_golden(&["verify", "peierls"], "verify_peierls.txt");
}

#[test]
fn klein_gordon_plane_wave() {
    assert_golden(
        &["symbol", "d2(x0) - d2(x1) - d2(x2) - d2(x3) + m^2"],
        "symbol_klein_gordon.txt",
    );
    let out = jacobi(&["symbol", "x0*d(x1)", "x1^2"]);
    assert_eq!(stdout(&out).trim(), "2*x0*x1");
}

#[test]
fn symbolic_peierls_bracket() {
    let out = jacobi(&["peierls", "--a", "x0 @ s=1", "--b", "x1 @ s=2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "-k0*x1 + k1*x0");
}

#[test]
fn numeric_peierls_bracket() {
    let out = jacobi(&[
        "peierls",
        "--geodesic",
        "x0=[0,0,0,0],k=[1,0,0,0]",
        "--a",
        "x1 @ s=0",
        "--b",
        "x1 @ s=t",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "t");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| jacobi(args).status.code();
    assert_eq!(code(&["verify", "operator"]), Some(0));
    assert_eq!(code(&["verify", "lagrangian"]), Some(0));
    assert_eq!(code(&["verify", "two-point"]), Some(1));
    assert_eq!(code(&["verify", "mass-shell", "--corrupt", "lambda"]), Some(1));
    assert_eq!(code(&["verify", "operator", "--corrupt", "lambda"]), Some(2));
    assert_eq!(code(&["verify", "mass-shell", "--corrupt", "omega"]), Some(2));
    assert_eq!(code(&["verify", "nowhere"]), Some(2));
    assert_eq!(code(&["bracket", "mass-shell", "x0", "q"]), Some(2));
    assert_eq!(code(&["bracket", "mass-shell", "x0", "(x1"]), Some(2));
    assert_eq!(
        code(&["bracket", "mass-shell", "x0", "x1", "--specialize", "m=0"]),
        Some(2)
    );
    assert_eq!(
        code(&["bracket", "mass-shell", "x0", "x1", "--specialize", "m"]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "peierls",
            "--geodesic",
            "x0=[0,0,0,0],k=[2,0,0,0]",
            "--a",
            "x0 @ s=1",
            "--b",
            "x1 @ s=2"
        ]),
        Some(2)
    );
    assert_eq!(code(&["peierls", "--a", "x0", "--b", "x1 @ s=2"]), Some(2));
    assert_eq!(code(&["symbol", "d(x0) / d(x1)"]), Some(2));
}

#[test]
fn corrupted_tensors_fail_verification() {
    for tensor in ["lambda", "gamma", "theta"] {
        let out = jacobi(&["verify", "mass-shell", "--corrupt", tensor]);
        assert_eq!(out.status.code(), Some(1), "{tensor}");
    }
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = jacobi(&["verify", "peierls", "--json", path.to_str().unwrap()]);
    let report = VerificationReport::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.to_text(), stdout(&out));
    assert!(report.all_passed());
}

#[test]
fn json_value_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("value.json");
    let out = jacobi(&["bracket", "mass-shell", "x0", "x1", "--json", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "bracket");
    assert_eq!(v["value"].as_str().unwrap(), stdout(&out).trim());
}
