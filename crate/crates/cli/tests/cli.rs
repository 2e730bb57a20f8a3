use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvenet")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn square_to_stl() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.stl");
    let o = run(&["gordon", &fixture("square.json"), "--out", out.to_str().unwrap(), "--nu", "2", "--nv", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("solid ") && text.trim_end().ends_with("endsolid gordon"));
    assert_eq!(text.matches("facet normal 0.00000000e+00 0.00000000e+00 1.00000000e+00").count(), 2);
    assert_eq!(text.matches("endfacet").count(), 2);
}

#[test]
fn square_to_obj_and_surface() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.obj");
    let surf = dir.path().join("s.json");
    let o = run(&[
        "gordon",
        &fixture("square.json"),
        "--out",
        out.to_str().unwrap(),
        "--nu",
        "3",
        "--nv",
        "4",
        "--surface-out",
        surf.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 12);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 12);

    let o = run(&["eval", surf.to_str().unwrap(), "--u", "0.5", "--v", "0.25"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let xyz: Vec<f64> = String::from_utf8(o.stdout).unwrap().split_whitespace().map(|s| s.parse().unwrap()).collect();
    assert!((xyz[0] - 0.5).abs() < 1e-12 && (xyz[1] - 0.25).abs() < 1e-12 && xyz[2].abs() < 1e-12);

    let o = run(&["eval", surf.to_str().unwrap(), "--u", "1.5", "--v", "0.25"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("outside domain"));
}

#[test]
fn check_prints_grid() {
    let o = run(&["check", &fixture("wing.json")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("4 profiles x 3 guides"));
    assert_eq!(text.lines().filter(|l| l.contains(" x ") && l.contains("u = ")).count(), 12);
    assert!(text.contains("section0 x trailing_lower: u = 0.000000000000 v = 0.000000000000"));
}

#[test]
fn missing_intersection_names_the_pair() {
    let o = run(&["check", &fixture("missing-intersection.json")]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(msg.contains("\"bottom\"") && msg.contains("\"right\""), "{msg}");
}

#[test]
fn non_bijective_is_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.stl");
    let o = run(&["gordon", &fixture("non-bijective.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not monotone"));
}

#[test]
fn airfoil_csv_hits_anchors() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("cst.json");
    std::fs::write(&params, r#"{"n1": 0.5, "n2": 1.0, "coefficients": [2, 3, 2, 1], "zeta_te": 0.2}"#).unwrap();
    let out = dir.path().join("a.csv");
    let o = run(&["airfoil", "--cst", params.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(text.lines().next(), Some("psi,zeta"));
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0], (0.0, 0.0));
    assert_eq!(rows[100], (1.0, 0.2));
    let direct = 0.5f64.sqrt() * 0.5 * 2.25 + 0.1;
    assert_eq!(rows[50].0, 0.5);
    assert!((rows[50].1 - direct).abs() < 1e-15);
}

#[test]
fn skin_wing_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.stl");
    let o = run(&["skin", &fixture("wing.json"), "--out", out.to_str().unwrap(), "--nu", "9", "--nv", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(out).unwrap().matches("endfacet").count(), 2 * 8 * 4);
}

#[test]
fn usage_errors() {
    let o = run(&["gordon", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check", "/nonexistent/network.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invalid_document_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("square.json")).unwrap().replacen("\"degree\": 1", "\"degree\": -1", 1);
    std::fs::write(&bad, text).unwrap();
    let o = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("profiles[0]"), "{}", stderr(&o));
}
