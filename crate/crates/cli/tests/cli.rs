use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fraczeta"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Runs the command writing to a temporary file, validates it against the
/// named schema, and returns the parsed artifact.
fn artifact(name: &str, args: &[&str]) -> (Value, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("out.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_owned();
    full.extend(["--out", &out_str]);
    let o = run(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&out).unwrap();
    let value: Value = serde_json::from_slice(&bytes).unwrap();
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
    (value, bytes)
}

#[test]
fn carpet_tube_row() {
    let o = run(&["tube", "--set", "carpet2", "--t", "0.1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,volume"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 0.1);
    assert!((row[1] - 221.0 / 225.0).abs() < 1e-15);
    assert!((row[1] - 0.982222).abs() < 1e-6);
    assert_eq!(lines.next(), None);
}

#[test]
fn csv_cells_carry_seventeen_digits() {
    let o = run(&["tube", "--set", "cantor", "--t", "1/18,0.01"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for cell in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let mantissa = cell.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 17, "{cell}");
    }
}

#[test]
fn carpet_poles_contain_its_dimension() {
    let (v, _) = artifact("poles", &["poles", "--set", "carpet2", "--window", "-1:3:20"]);
    let d = 8f64.ln() / 3f64.ln();
    let poles = v["poles"].as_array().unwrap();
    assert!(poles
        .iter()
        .any(|p| (p["re"].as_f64().unwrap() - d).abs() < 1e-12 && p["im"].as_f64().unwrap() == 0.0));
    assert!(poles.iter().all(|p| p["order"] == 1));
}

#[test]
fn spray_poles_report_their_lattice() {
    let (v, _) = artifact("poles", &["poles", "--ratios", "0.5,0.25", "--window", "-2:2:10"]);
    assert_eq!(v["lattice"]["exponents"], serde_json::json!([1, 2]));
}

#[test]
fn every_json_artifact_matches_its_schema() {
    artifact("tube", &["tube", "--set", "nest:1/2", "--grid", "1e-4:1e-2:8", "--format", "json"]);
    artifact("dims", &["dims", "--set", "cantor", "--t-min", "1e-6", "--t-max", "1e-3"]);
    artifact("dims", &["dims", "--set", "flat", "--t-min", "1e-3", "--t-max", "1e-1"]);
    artifact("zeta", &["zeta", "--set", "carpet3", "--s", "3.5,-2"]);
    artifact("zeta", &["zeta", "--set", "cantor", "--s", "1.2", "--method", "quad"]);
    artifact("zeta", &["zeta", "--set", "cantor", "--s", "0.9,1", "--method", "geometric"]);
    artifact("zeta", &["zeta", "--set", "carpet2", "--s", "2.3", "--method", "tube"]);
    artifact("zeta", &["zeta", "--set", "carpet2", "--s", "2.5", "--method", "mc", "--seed", "1", "--n", "20000"]);
    let (r, _) = artifact("tubeformula", &["tubeformula", "--set", "carpet2", "--t", "0.1"]);
    assert!(r["abs_error"].as_f64().unwrap() < 1e-6);
    let (q, _) = artifact("quasi-pair", &["quasi", "pair", "--m1", "2", "--m2", "3", "--d", "1/2", "--band", "4"]);
    assert_eq!(q["a1"], 0.25);
    artifact("quasi-hyper", &["quasi", "hyper", "--d", "1/2", "--k", "3", "--m", "2,3,5", "--c", "1/2,1/4,1/8"]);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let cases: [(&str, &[&str]); 4] = [
        ("zeta", &["zeta", "--set", "carpet2", "--s", "2.4,0.5", "--method", "mc", "--seed", "5", "--n", "50000"]),
        ("poles", &["poles", "--ratios", "0.5,0.3333333333333333", "--window", "-1:1:30"]),
        ("dims", &["dims", "--set", "carpet2", "--t-min", "1e-4", "--t-max", "1e-1"]),
        ("verify", &["verify", "--suite", "scaling", "--format", "json"]),
    ];
    for (name, args) in cases {
        let (_, a) = artifact(name, args);
        let (_, b) = artifact(name, args);
        assert_eq!(a, b, "{args:?}");
    }
    let serial = run(&["--threads", "1", "zeta", "--set", "cantor", "--s", "1", "--method", "mc", "--seed", "2", "--n", "30000"]);
    let parallel = run(&["--threads", "4", "zeta", "--set", "cantor", "--s", "1", "--method", "mc", "--seed", "2", "--n", "30000"]);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn plot_data_is_xy_csv() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let o = run(&["poles", "--set", "cantor", "--window", "0:1:10", "--emit-plot-data", plot.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(plot).unwrap();
    assert!(text.starts_with("x,y\n"));
    // s = 0, s = D and D ± 2πi/log 3 (the next ordinate, 11.4, is out)
    assert_eq!(text.lines().count(), 1 + 4);
}

#[test]
fn verify_passes_a_suite() {
    let o = run(&["verify", "--suite", "carpet-tube"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("[PASS]  1 carpet-tube"));
    assert!(text.contains("1 of 1 criteria passed"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let bad: [&[&str]; 7] = [
        &["tube", "--set", "sphere", "--t", "0.1"],
        &["tube", "--set", "carpet2", "--t", "-1"],
        &["zeta", "--set", "carpet2", "--s", "2.5", "--method", "mc"],
        &["quasi", "pair", "--m1", "2", "--m2", "4", "--d", "1/2"],
        &["poles", "--set", "astring:1", "--window", "0:1:1"],
        &["verify", "--suite", "nope"],
        &["--threads", "0", "tube", "--set", "carpet2", "--t", "0.1"],
    ];
    for args in bad {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["quasi", "pair", "--m1", "2", "--m2", "4", "--d", "1/2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("[2, -1]"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
