use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_planar-search");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("PLANAR_SEARCH_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn unit_cost_and_kappa_print_table_precision() {
    let out = run(&["unit-cost", "--n", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "17.28935");
    assert_eq!(stdout(&run(&["kappa", "--n", "1"])).trim(), "0.155402");
    assert_eq!(stdout(&run(&["unit-cost", "--n", "0"])).trim(), "inf");
}

#[test]
fn unit_cost_json_keeps_full_precision() {
    let out = run(&["unit-cost", "--n", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cost = v["cost"].as_f64().unwrap();
    assert!((cost - 8.928_516_954_106_769).abs() < 1e-13);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["cone", "--phi", "0"]).status.code(), Some(2));
    assert_eq!(run(&["offset", "--speeds", "1,-0.5"]).status.code(), Some(2));
    assert_eq!(run(&["hybrid", "--speed", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(64));
    assert_eq!(run(&["cone"]).status.code(), Some(64));
    assert_eq!(run(&["verify", "--strategy", "uniform"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let strict = run(&[
        "verify", "--strategy", "cone", "--phi", "45", "--degrees", "--tolerance", "1e-15",
    ]);
    assert_eq!(strict.status.code(), Some(3));
}

#[test]
fn degrees_match_radians() {
    let a = stdout(&run(&["cone", "--phi", "45", "--degrees", "--json"]));
    let b = stdout(&run(&["cone", "--phi", "0.7853981633974483", "--json"]));
    assert_eq!(a, b);
}

#[test]
fn tables_json_has_both_tables() {
    let out = run(&["tables", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["unit_spirals"].as_array().unwrap().len(), 7);
    let factors = v["participation_factors"].as_array().unwrap();
    assert_eq!(factors.len(), 8);
    assert_eq!(factors[7]["l"], 1000);
}

#[test]
fn offset_plan_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    let out = run(&["offset", "--speeds", "1,0.9", "--out", plan.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&plan).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["nu"], 2);
    assert!(text.contains("9.4114832341354848e0"));

    let ok = run(&["verify", "--strategy", "offset", "--plan", plan.to_str().unwrap()]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));

    let tampered = text.replace("9.4114832341354848e0", "9.4114832341350000e0");
    std::fs::write(&plan, tampered).unwrap();
    let bad = run(&["verify", "--strategy", "offset", "--plan", plan.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn out_dir_variable_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["curve", "--c-min", "0.1", "--c-max", "0.5", "--steps", "5", "--out", "sub/curve.csv"])
        .env("PLANAR_SEARCH_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("sub/curve.csv").exists());
}

#[test]
fn curve_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = run(&["curve", "--steps", "40", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["c", "spiral_bound", "hybrid_bound", "combined", "phi_used"]);
    assert_eq!(rows.len(), 40);
    assert_eq!(rows[39][0].parse::<f64>().unwrap(), 1.0);
    for row in &rows {
        let spiral: f64 = row[1].parse().unwrap();
        let combined: f64 = row[3].parse().unwrap();
        assert!(combined <= spiral);
        assert_eq!(row[2].is_empty(), row[4].is_empty());
        let mantissa = row[0].split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
    }
    assert!(rows.iter().any(|r| r[2].is_empty()));
    assert!(rows.iter().any(|r| !r[2].is_empty()));
}

#[test]
fn sweeps_write_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let wedge = dir.path().join("wedge.csv");
    let hybrid = dir.path().join("gamma.csv");
    assert!(run(&["wedge", "--sweep", "25", "--out", wedge.to_str().unwrap()]).status.success());
    assert!(run(&["hybrid", "--sweep", "25", "--out", hybrid.to_str().unwrap()]).status.success());
    let (h, rows) = read_csv(&wedge);
    assert_eq!(h.len(), 5);
    assert_eq!(rows.len(), 25);
    let (h, rows) = read_csv(&hybrid);
    assert_eq!(h, ["phi", "gamma", "cone_cost", "r_phi"]);
    let gammas: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(gammas.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(run(&["wedge", "--sweep", "5"]).status.code(), Some(64));
}

#[test]
fn verify_json_report() {
    let out = run(&["verify", "--strategy", "uniform", "--n", "3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["strategy_id"], "uniform-3");
    assert!(v["relative_gap"].as_f64().unwrap() < 0.005);
}
