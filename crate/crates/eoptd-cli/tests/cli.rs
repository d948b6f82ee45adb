//! End-to-end tests of the `eoptd` binary: construction, verification,
//! table reproduction against the checked-in golden files, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn eoptd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eoptd"))
        .args(args)
        .env_remove("EOPTD_KMAX")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn design_cube_k5_minimal() {
    let out = eoptd(&["design", "cube", "--k", "5"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("E_0: mass 2/15"), "{text}");
    assert!(text.contains("E_3: mass 2/3"), "{text}");
    assert!(text.contains("E_5: mass 1/5"), "{text}");
    assert!(text.contains("support points: 73"), "{text}");
    assert!(text.contains("lambda_min: 1/5 (multiplicity 15)"), "{text}");
}

#[test]
fn design_cube_explicit_triple() {
    let out = eoptd(&["design", "cube", "--k", "2", "--triple", "0,1,2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("E_0: mass 1/5"), "{text}");
    assert!(text.contains("E_1: mass 2/5"), "{text}");
    assert!(text.contains("E_2: mass 2/5"), "{text}");
}

#[test]
fn design_ball_k2() {
    let out = eoptd(&["design", "ball", "--k", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("mass 2/5"), "{text}");
    assert!(text.contains("mass 1/5"), "{text}");
    assert!(text.contains("lambda_min: 1/10 (multiplicity 3)"), "{text}");
}

#[test]
fn infeasible_triple_lists_alternatives() {
    let out = eoptd(&["design", "cube", "--k", "6", "--triple", "0,1,2"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("feasible depth sets for k=6"), "{err}");
    assert!(err.contains("(0,4,6)"), "{err}");
}

#[test]
fn float_rendering_behind_flag() {
    let out = eoptd(&["design", "cube", "--k", "2", "--float"]);
    let text = stdout_of(&out);
    assert!(text.contains("0.2"), "{text}");
    assert!(!text.contains("1/5"), "{text}");
}

#[test]
fn verify_round_trip_passes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("design.json");
    let out = eoptd(&[
        "design",
        "cube",
        "--k",
        "3",
        "--format",
        "json",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = eoptd(&["verify", file.to_str().unwrap(), "--format", "json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["lambda_min"], "1/5");
    assert_eq!(report["pass"], true);

    // ball k=4 verifies with λ_min = 1/26 (vertex coordinates ±1/2 stay
    // rational there)
    let file = dir.path().join("ball.json");
    let out = eoptd(&[
        "design",
        "ball",
        "--k",
        "4",
        "--format",
        "json",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = eoptd(&["verify", file.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["lambda_min"], "1/26");

    // ball k=3 exercises the irrational ±1/√3 coordinate objects on disk
    let file = dir.path().join("ball3.json");
    let out = eoptd(&[
        "design",
        "ball",
        "--k",
        "3",
        "--format",
        "json",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let raw = std::fs::read_to_string(&file).unwrap();
    assert!(
        raw.contains("inv_sqrt_k"),
        "expected surd coordinates: {raw}"
    );
    let out = eoptd(&["verify", file.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["lambda_min"], "1/17");
    assert_eq!(report["support_equality_max_err"], 0.0);
}

#[test]
fn verify_fails_on_perturbed_design() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    // mass shifted between barycenter classes: (0.3, 0.3, 0.4)
    let design = serde_json::json!({
        "k": 2,
        "space": "cube",
        "points": [
            ["1","1"], ["1","-1"], ["-1","1"], ["-1","-1"],
            ["0","1"], ["0","-1"], ["1","0"], ["-1","0"],
            ["0","0"]
        ],
        "weights": ["3/40","3/40","3/40","3/40",
                     "3/40","3/40","3/40","3/40",
                     "2/5"]
    });
    std::fs::write(&file, serde_json::to_string_pretty(&design).unwrap()).unwrap();
    let out = eoptd(&["verify", file.to_str().unwrap(), "--format", "json"]);
    assert!(!out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["pass"], false);
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).expect("golden file exists")
}

#[test]
fn table1_matches_golden() {
    let out = eoptd(&["table", "table1", "--k", "1..24"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), golden("table1.csv"));
}

#[test]
fn table2_matches_golden() {
    let out = eoptd(&["table", "table2", "--k", "4..24"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), golden("table2.csv"));
}

#[test]
fn diophantine_matches_golden_and_k2_empty() {
    let out = eoptd(&["table", "diophantine", "--k", "1..24"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), golden("diophantine.csv"));

    let out = eoptd(&["table", "diophantine", "--k", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "k,s,t\n");
}

#[test]
fn kmax_env_caps_tables() {
    let out = Command::new(env!("CARGO_BIN_EXE_eoptd"))
        .args(["table", "table1", "--k", "1..24"])
        .env("EOPTD_KMAX", "10")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("EOPTD_KMAX"));

    let out = Command::new(env!("CARGO_BIN_EXE_eoptd"))
        .args(["table", "table1", "--k", "1..30"])
        .env("EOPTD_KMAX", "30")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).lines().count() == 31);
}

#[test]
fn compare_rotatable_k2() {
    let out = eoptd(&["compare-rotatable", "--k", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("alpha = 24/35"), "{text}");
    assert!(text.contains("lambda_min = 3/35"), "{text}");
    assert!(text.contains("lambda_min = 1/10"), "{text}");
    assert!(text.contains("not rotatable"), "{text}");
    assert!(text.contains("6/7"), "{text}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = eoptd(&["design", "cube", "--k", "4", "--format", "json"]);
    let b = eoptd(&["design", "cube", "--k", "4", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = eoptd(&["table", "table1", "--k", "1..12"]);
    let b = eoptd(&["table", "table1", "--k", "1..12"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn design_csv_output() {
    let out = eoptd(&["design", "cube", "--k", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,weight"));
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), 3);
    assert!(body.contains(&"0,3/5"));
    assert!(body.contains(&"1,1/5"));
}
