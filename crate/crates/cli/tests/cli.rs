use std::process::{Command, Output};

fn sips(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sips"))
        .args(args)
        .env_remove("SIPS_DEFAULT_GRID")
        .output()
        .expect("spawn sips")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn list_json_has_all_models() {
    let o = sips(&["list", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|m| m["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["scarf", "poschl_teller", "morse", "oscillator"]);
}

#[test]
fn unknown_format_is_usage_error() {
    assert_eq!(code(&sips(&["list", "--format", "xml"])), 2);
    assert_eq!(code(&sips(&["list", "--format", "csv"])), 2);
}

#[test]
fn scarf_spectrum_json() {
    let o = sips(&["spectrum", "--model", "scarf", "--params", "a=3,B=1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e: Vec<f64> = v["energies"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(e, [0.0, 5.0, 8.0]);
}

#[test]
fn both_routes_agree() {
    let o = sips(&["spectrum", "--model", "poschl_teller", "--params", "a=5", "--route", "both", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_discrepancy"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn algebra_route_rejects_oscillator() {
    assert_eq!(code(&sips(&["spectrum", "--model", "oscillator", "--route", "algebra"])), 2);
}

#[test]
fn bad_params_are_usage_errors() {
    assert_eq!(code(&sips(&["spectrum", "--model", "scarf", "--params", "a=3"])), 2);
    assert_eq!(code(&sips(&["spectrum", "--model", "scarf", "--params", "a=3,B=1,C=2"])), 2);
    assert_eq!(code(&sips(&["spectrum", "--model", "morse", "--params", "a=3,B=-1"])), 2);
    assert_eq!(code(&sips(&["spectrum", "--model", "nope", "--params", "a=3"])), 2);
}

#[test]
fn verify_passes_then_fails_at_tight_tol() {
    let args = ["verify", "--model", "scarf", "--params", "a=3,B=1", "--format", "json"];
    let o = sips(&args);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["comparison"]["max_abs_diff"].as_f64().unwrap() < 1e-3);

    let mut tight = args.to_vec();
    tight.extend(["--tol", "1e-9"]);
    let o = sips(&tight);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["identity_passed"], true);
}

#[test]
fn wavefunction_csv_and_out_of_range() {
    let o = sips(&["wavefunction", "--model", "scarf", "--params", "a=3,B=1", "--n", "2", "--grid", "-15:15:1501"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("# node_count=2"));
    let rows = text.lines().skip_while(|l| l.starts_with('#')).skip(1).count();
    assert_eq!(rows, 1501);

    let o = sips(&["wavefunction", "--model", "scarf", "--params", "a=3,B=1", "--n", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
}

#[test]
fn wavefunction_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let o = sips(&[
        "wavefunction", "--model", "morse", "--params", "a=3,B=1", "--n", "1", "--format", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["node_count"], 1);
    assert!(v["oracle_residual"].as_f64().unwrap() < 1e-3);
}

#[test]
fn algebra_check_passes_for_scarf() {
    let o = sips(&["algebra", "check", "--model", "scarf", "--params", "B=1", "--m", "3.5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);

    let o = sips(&["algebra", "check", "--model", "scarf", "--m", "2", "--test-function", "gaussian"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["model"], "scarf");
    assert!(v["residuals"]["eq5"].as_f64().unwrap() < 1e-4);
    assert!(v["residuals"]["eq8"].as_f64().unwrap() < 1e-4);
}

#[test]
fn reps_classify_cases() {
    let o = sips(&["reps", "classify", "--j", "-1.5", "--m0", "1.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rep"]["class"], "D_plus");

    let o = sips(&["reps", "classify", "--j", "-1.5", "--m0", "0.7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rep"].is_null());

    let o = sips(&["reps", "classify", "--j", "-0.5", "--m0", "0", "--beta", "1.2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rep"]["class"], "D_p");
}

#[test]
fn reps_enumerate_d_minus() {
    let o = sips(&["reps", "enumerate", "--class", "D_minus", "--j", "-2", "--count", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ms: Vec<f64> = v["m_values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(ms, [-2.0, -3.0, -4.0]);
}

#[test]
fn region_grid_csv() {
    let o = sips(&["reps", "region-grid", "--j", "-1:0:0.5", "--m", "-1:1:1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("j,m,region"));
    assert_eq!(text.lines().count(), 1 + 9);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "model = \"scarf\"\nparams = \"a=4,B=0.5\"\nformat = \"json\"\n").unwrap();
    let cfg = path.to_str().unwrap();

    let o = sips(&["--config", cfg, "spectrum"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["energies"].as_array().unwrap().len(), 4);

    let o = sips(&["--config", cfg, "spectrum", "--params", "a=2,B=0.5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["energies"].as_array().unwrap().len(), 2);

    std::fs::write(&path, "model = \"scarf\"\nbogus = 1\n").unwrap();
    assert_eq!(code(&sips(&["--config", cfg, "spectrum"])), 2);
}

#[test]
fn grid_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_sips"))
        .args(["verify", "--model", "poschl_teller", "--params", "a=2", "--format", "json"])
        .env("SIPS_DEFAULT_GRID", "-12:12:1201")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["grid"]["n_points"], 1201);

    let o = Command::new(env!("CARGO_BIN_EXE_sips"))
        .args(["verify", "--model", "poschl_teller", "--params", "a=2"])
        .env("SIPS_DEFAULT_GRID", "garbage")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
