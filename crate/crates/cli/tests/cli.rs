use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rotorsim_cli::config;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"))
}

fn rotorsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotorsim"))
        .args(args)
        .output()
        .expect("rotorsim runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const ALL: [&str; 8] = [
    "coincident_spin",
    "noncoincident_spin",
    "midpoint_noncoincident",
    "rotor_feedback_witness",
    "control_up_witness",
    "kirchhoff_coincident",
    "hj_zero",
    "hj_perturbed",
];

#[test]
fn config_roundtrip_is_idempotent() {
    for name in ALL {
        let text = std::fs::read_to_string(scenario(name)).unwrap();
        let once = config::normalized(&config::parse(&text).unwrap());
        let twice = config::normalized(&config::parse(&once).unwrap());
        assert_eq!(once, twice, "{name}");
    }
}

#[test]
fn simulate_writes_headers_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("coincident_spin", "t,Pi1,Pi2,Pi3,P1,P2,P3,theta1,theta2,l1,l2,energy,C_PP,C_PiP"),
        (
            "noncoincident_spin",
            "t,Pi1,Pi2,Pi3,P1,P2,P3,Gamma1,Gamma2,Gamma3,theta1,theta2,l1,l2,energy,C_PP,C_PiP,C_GG,C_PG",
        ),
    ];
    for (name, header) in cases {
        let out = dir.path().join(format!("{name}.csv"));
        let o = rotorsim(&["simulate", "--config", scenario(name).to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        let csv = std::fs::read_to_string(&out).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), header);
        // 10 s at dt = 1e-3 with every tenth sample kept
        assert_eq!(lines.count(), 1001);
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
        assert_eq!(summary["step_count"], 10_000);
    }
}

#[test]
fn csv_values_parse_back_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = rotorsim(&[
        "simulate",
        "--config",
        scenario("kirchhoff_coincident").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    for line in csv.lines().skip(1).take(50) {
        for field in line.split(',') {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), field);
        }
    }
}

#[test]
fn check_passes_on_conservative_scenario() {
    let o = rotorsim(&["check", "--config", scenario("coincident_spin").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn check_marks_coalgebra_lift_as_expected_failure() {
    let o = rotorsim(&["check", "--config", scenario("control_up_witness").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.contains("Casimir drift |P|²") && l.contains("FAIL-EXPECTED")));
}

#[test]
fn negative_inertia_is_a_config_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario("coincident_spin"))
        .unwrap()
        .replace("\"ibar\": [1.0, 2.0, 3.0]", "\"ibar\": [-1.0, 2.0, 3.0]");
    let path = write(dir.path(), "bad.json", &text);
    let o = rotorsim(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("ibar"), "{err}");
    // anchored to the line of the offending key
    assert!(err.contains("bad.json:4:"), "{err}");
}

#[test]
fn syntax_errors_are_line_anchored() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "broken.json", "{\n  \"variant\": \"coincident\",\n  \"params\": ,\n}\n");
    let o = rotorsim(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.json:3:"), "{}", stderr(&o));
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario("coincident_spin"))
        .unwrap()
        .replace("\"control\"", "\"contrl\"");
    let path = write(dir.path(), "typo.json", &text);
    let o = rotorsim(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("contrl"));
}

#[test]
fn hj_zero_candidate_is_a_solution() {
    let o = rotorsim(&["hj", "--config", scenario("hj_zero").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["is_solution"], true);
    assert_eq!(report["max_abs_residual"], 0.0);
}

#[test]
fn hj_perturbed_candidate_reports_worst_row() {
    let o = rotorsim(&["hj", "--config", scenario("hj_perturbed").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["is_solution"], false);
    assert_eq!(report["worst_sample"], 1);
    assert_eq!(report["worst_row"], 2);
    let r = report["max_abs_residual"].as_f64().unwrap();
    assert!((r - 1.0 / 3.0).abs() <= 1e-15);
}

#[test]
fn hj_without_grid_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario("hj_zero")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["hj"].as_object_mut().unwrap().remove("grid");
    let path = write(dir.path(), "nogrid.json", &serde_json::to_string_pretty(&v).unwrap());
    let o = rotorsim(&["hj", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid"));
}

#[test]
fn hj_without_section_is_a_config_error() {
    let o = rotorsim(&["hj", "--config", scenario("coincident_spin").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_without_integrator_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = rotorsim(&["simulate", "--config", scenario("hj_zero").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn midpoint_non_convergence_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(scenario("midpoint_noncoincident")).unwrap()).unwrap();
    v["integrator"]["max_iterations"] = 1.into();
    v["integrator"]["dt"] = 0.5.into();
    let path = write(dir.path(), "stiff.json", &serde_json::to_string_pretty(&v).unwrap());
    let o = rotorsim(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn missing_config_file_is_a_config_error() {
    let o = rotorsim(&["check", "--config", "/nonexistent/rotorsim.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_is_deterministic_and_passes() {
    for variant in ["coincident", "noncoincident"] {
        let a = rotorsim(&["oracle", "--n", "200", "--seed", "7", "--variant", variant]);
        let b = rotorsim(&["oracle", "--n", "200", "--seed", "7", "--variant", variant]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(stdout(&a), stdout(&b));
        assert!(stdout(&a).trim_end().ends_with("PASS"));
    }
    let o = rotorsim(&["oracle", "--n", "100", "--seed", "7", "--variant", "noncoincident", "--fd"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("mode=fd"));
}

#[test]
fn oracle_rejects_zero_samples() {
    let o = rotorsim(&["oracle", "--n", "0", "--seed", "1", "--variant", "coincident"]);
    assert_eq!(o.status.code(), Some(2));
}
