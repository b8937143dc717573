use parakepler::geometry::spherical_to_parabolic;
use parakepler::{assemble_state, wavefunction, QuantumNumbers, SpaceTag, SphericalPoint};
use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parakepler")).args(args).env_remove("PARAKEPLER_OUT_DIR").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    v
}

fn text(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn h3_spectrum() {
    let v = json(&["spectrum", "--space", "h3", "--e", "5"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["epsilon"], -12.5);
    assert_eq!(rows[1]["epsilon"], -4.625);
    assert_eq!(rows[1]["degeneracy"], 4);
    assert_eq!(v["bound_count"], 2);
    assert_eq!(v["interval"], serde_json::json!([-12.5, -4.5]));
}

#[test]
fn s3_spectrum_needs_max_k() {
    let v = json(&["spectrum", "--space", "s3", "--e", "0", "--max-k", "3"]);
    let eps: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["epsilon"].as_f64().unwrap()).collect();
    assert_eq!(eps, vec![0.0, 1.5, 4.0]);
    let out = run(&["spectrum", "--space", "s3", "--e", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-k"));
}

#[test]
fn spectrum_csv() {
    let s = text(&["spectrum", "--space", "h3", "--e", "10", "--format", "csv"]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("k,epsilon,degeneracy,admissible"));
    assert_eq!(lines.next(), Some("1,-50,1,true"));
    assert!(s.contains("# bound_count=3"));
    assert!(!s.contains('\r'));
}

#[test]
fn state_parameters() {
    let v = json(&["state", "--space", "s3", "--e", "2", "--n1", "0", "--n2", "0", "--m", "1"]);
    assert_eq!(v["state"]["b1"], serde_json::json!([0.0, -0.5]));
    let v = json(&["state", "--space", "h3", "--e", "5", "--n2", "1"]);
    assert_eq!(v["state"]["b1"], serde_json::json!([1.75, 0.0]));
    let v = json(&["state", "--space", "s3", "--e", "2", "--m", "-1"]);
    assert_eq!(v["state"]["qn"]["m"], -1);
    let out = run(&["state", "--space", "h3", "--e", "5", "--n1", "1", "--n2", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn eval_csv_layout_and_axis_zeros() {
    let s = text(&["eval", "--space", "s3", "--e", "2", "--m", "1", "--chi", "0.2:3:8", "--theta", "0:3.141592653589793:5"]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("chi,theta,phi,re_psi,im_psi,abs2,skipped"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 40);
    for r in &rows {
        assert_eq!(r.len(), 7);
        if r[6] == "1" {
            continue;
        }
        let abs2: f64 = r[5].parse().unwrap();
        assert!(abs2 >= 0.0);
        let theta: f64 = r[1].parse().unwrap();
        if theta == 0.0 {
            assert_eq!(abs2, 0.0);
        }
    }
}

#[test]
fn eval_single_point_matches_library() {
    let s = text(&["eval", "--space", "h3", "--e", "10", "--n1", "1", "--m", "1", "--chi", "0.7:0.7:1", "--theta", "1.1:1.1:1", "--phi", "0.4:0.4:1"]);
    let row: Vec<f64> = s.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let st = assemble_state(SpaceTag::H3, 10.0, QuantumNumbers::new(1, 0, 1)).unwrap();
    let sp = SphericalPoint::new(SpaceTag::H3, 0.7, 1.1, 0.4).unwrap();
    let psi = wavefunction(&st, &spherical_to_parabolic(SpaceTag::H3, &sp).unwrap()).unwrap();
    assert_eq!(row[3].to_bits(), psi.re.to_bits());
    assert_eq!(row[4].to_bits(), psi.im.to_bits());
    assert_eq!(row[6], 0.0);
}

#[test]
fn eval_rejects_out_of_range_grid() {
    let out = run(&["eval", "--space", "s3", "--chi", "0:4:3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let args = ["verify", "all", "--space", "s3", "--e", "2", "--max-k", "3", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 7);
    let other = run(&["verify", "all", "--space", "s3", "--e", "2", "--max-k", "3", "--seed", "8"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn verify_h3() {
    let out = run(&["verify", "all", "--space", "h3", "--e", "10", "--format", "human"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_negative_control_fails() {
    let out = run(&["verify", "ode", "--perturb-eps", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert!(!v["results"][0]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_commutators_exact() {
    let v = json(&["verify", "commutators", "--space", "h3"]);
    assert_eq!(v["passed"], true);
    assert!(v["results"][0]["report"]["max_rel"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_tolerance_override() {
    let out = run(&["verify", "hamiltonian", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["verify", "hamiltonian", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--space", "r3", "--max-k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["state", "--e", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["limit", "--rho-list", "1000,100"]).status.code(), Some(2));
}

#[test]
fn limit_table() {
    let v = json(&["limit", "--space", "h3", "--e", "10"]);
    let slope = v["slope"].as_f64().unwrap();
    assert!((slope + 1.0).abs() < 0.1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let spectrum = v["spectrum"].as_array().unwrap();
    assert_eq!(spectrum.len(), 3);
    assert!(spectrum.iter().all(|r| r["rydberg_exact"] == true));
    assert_eq!(v["rho_independent"], true);
    let v = json(&["limit", "--space", "s3", "--point", "0,0,1", "--rho-list", "100,1000,10000"]);
    assert!((v["slope"].as_f64().unwrap() + 1.0).abs() < 0.1);
}

#[test]
fn json_floats_round_trip() {
    let v = json(&["state", "--space", "h3", "--e", "10", "--n1", "1"]);
    let eps = v["state"]["epsilon"].as_f64().unwrap();
    assert_eq!(eps, parakepler::kepler::energy(SpaceTag::H3, 10.0, 2).unwrap());
}

#[test]
fn out_file_and_directory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    let out = run(&["spectrum", "--space", "h3", "--e", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["bound_count"], 2);

    let out = Command::new(env!("CARGO_BIN_EXE_parakepler"))
        .args(["spectrum", "--space", "h3", "--e", "5", "--format", "csv", "--out", "nested/s.csv"])
        .env("PARAKEPLER_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("nested/s.csv")).unwrap().starts_with("k,epsilon"));
}
