use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptolemy")).args(args).env("PTOLEMY_FIXTURES", fixtures()).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_shipped_fixtures() {
    let o = run(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("four-holed sphere"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn corrupted_triangle_exits_with_one() {
    let text = std::fs::read_to_string(fixture("four_holed_sphere.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["triangulation"]["triangles"][2][0] = serde_json::json!(99);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = run(&["validate", "--fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("triangle 2"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_with_two() {
    let o = run(&["validate", "--fixture", "/nonexistent/fixture.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bundled_twist_scripts() {
    for (name, phase) in [("Db.short", "phase -3"), ("Da.short", "phase -1")] {
        let o = run(&["script", "--fixture", &fixture("two_holed_torus.json"), "--script", name]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains(phase), "{}", stdout(&o));
    }
}

#[test]
fn script_on_the_wrong_word_fails() {
    let o = run(&["script", "--fixture", &fixture("two_holed_torus.json"), "--script", "Db.short", "--to", "F1 F5 F8 F4 P(4 8)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("differs from the expected"), "{}", stderr(&o));
}

#[test]
fn verify_lantern() {
    let o = run(&["verify", "--relation", "lantern", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["relations"][0]["relation"], "lantern");
    assert_eq!(doc["relations"][0]["zexp"], -12);
}

#[test]
fn verify_chain_reports_minus_twenty_two() {
    let o = run(&["verify", "--relation", "chain", "--no-search"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o).lines().find(|l| l.contains(" chain ")).unwrap().to_string();
    assert!(line.split_whitespace().any(|w| w == "-22"), "{line}");
}

#[test]
fn class_of_the_computed_exponents_is_not_integral() {
    let o = run(&["verify", "--all", "--class", "--no-search"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("lift rescaling D -> z^{-12} D"), "{out}");
    assert!(out.contains("non-integral"), "{out}");
}

#[test]
fn machine_readable_reports_are_deterministic() {
    let args = ["verify", "--all", "--no-search", "--seed", "9", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["seed"], 9);
    assert_eq!(doc["fixtures"].as_array().unwrap().len(), 2);
    assert_eq!(doc["fixtures"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn bad_tolerance_is_an_input_error() {
    let o = run(&["verify", "--relation", "braid0", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simplify_a_twist_against_its_short_form() {
    let o = run(&["simplify", "--fixture", &fixture("two_holed_torus.json"), "--word", "Da P(2 3 4) F3 F4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("result (empty)"), "{}", stdout(&o));
    assert!(stdout(&o).contains("phase  -1"), "{}", stdout(&o));
}

#[test]
fn reconstruct_the_one_holed_torus_twist() {
    let o = run(&["reconstruct", "--genus", "1", "--punctures", "1", "--word", "F1 P(2 3)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("candidate"));
}
