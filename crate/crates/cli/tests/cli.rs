use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use opkit_cli::Report;
use tempfile::TempDir;

fn opkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opkit")).args(args).output().expect("binary runs")
}

fn fixture(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn transpose_choi_fails_complete_positivity() {
    let dir = TempDir::new().unwrap();
    // Choi matrix of the transpose map on M_2 is the swap operator.
    let choi = fixture(dir.path(), "transpose2.json", r#"{"rows":4,"cols":4,"data":[1,0,0,0, 0,0,1,0, 0,1,0,0, 0,0,0,1]}"#);
    let out = opkit(&["cp", "verify", "--choi", path(&choi)]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(!r.pass && !r.checks["completely_positive"]);
    let min = r.results["min_choi_eigenvalue"].as_f64().unwrap();
    assert!((min + 1.0).abs() < 1e-10, "{min}");
    assert!(r.results.contains_key("witness"));
}

#[test]
fn identity_channel_given_by_kraus_passes() {
    let dir = TempDir::new().unwrap();
    let map = fixture(dir.path(), "id.json", r#"{"kraus":[{"rows":2,"cols":2,"data":[1,0,0,1]}]}"#);
    let out = opkit(&["cp", "verify", "--map", path(&map)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.results["kraus_rank"], 1);
    assert_eq!(r.results["stinespring_rank"], 1);
}

#[test]
fn repeated_eigenvalue_has_multiplicity_two() {
    let dir = TempDir::new().unwrap();
    let m = fixture(dir.path(), "diag112.json", r#"{"rows":3,"cols":3,"data":[1,0,0, 0,1,0, 0,0,2]}"#);
    let out = opkit(&["spectral", "decompose", "--matrix", path(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let mut mult: Vec<u64> = r.results["multiplicities"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    mult.sort_unstable();
    assert_eq!(mult, vec![1, 2]);
}

#[test]
fn periodic_extension_has_eigenvalue_at_zero() {
    let out = opkit(&["--quiet", "extension", "--grid", "512", "--theta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!((r.results["d_plus"].as_u64(), r.results["d_minus"].as_u64()), (Some(1), Some(1)));
    let eig: Vec<f64> = r.results["eigenvalues"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let nearest = eig.iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min);
    assert!(nearest < 1e-3, "{nearest}");
}

#[test]
fn same_seed_gives_identical_report() {
    let args = ["--quiet", "--seed", "11", "brownian", "--grid", "32", "--modes", "16", "--paths", "500", "--emit", "paths"];
    let a = opkit(&args);
    let b = opkit(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = opkit(&["--quiet", "--seed", "12", "brownian", "--grid", "32", "--modes", "16", "--paths", "500", "--emit", "paths"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(report(&a).results["paths"].as_array().unwrap().len(), 500);
}

#[test]
fn reports_round_trip_through_json() {
    let dir = TempDir::new().unwrap();
    let rho = fixture(dir.path(), "rho.json", r#"{"density":{"rows":2,"cols":2,"data":[0.7,0,0,0.3]}}"#);
    let gens = fixture(dir.path(), "gens.json", r#"[{"rows":2,"cols":2,"data":[0,1,0,0]}]"#);
    let sub = fixture(
        dir.path(),
        "sub.json",
        r#"{"elements":[0,2],"matrices":[{"rows":1,"cols":1,"data":[1]},{"rows":1,"cols":1,"data":[-1]}]}"#,
    );
    let input = fixture(dir.path(), "f.json", "[1, [0, 1], 2, 3]");
    let runs: Vec<Vec<&str>> = vec![
        vec!["gns", "--density", path(&rho)],
        vec!["commutant", "--generators", path(&gens), "--star"],
        vec!["group", "induce", "--cyclic", "4", "--subgroup", path(&sub)],
        vec!["group", "dft", "--input", path(&input)],
        vec!["group", "haar-check", "--grid", "200"],
        vec!["wavelet", "mt-matrix", "--level", "2"],
    ];
    for args in runs {
        let out = opkit(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r.schema, opkit_cli::SCHEMA);
        let again: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(again, r);
        for (name, ok) in &r.checks {
            assert_eq!(*ok, r.residuals[name] <= r.tolerances[name]);
        }
    }
}

#[test]
fn tighter_tolerance_can_fail_a_check() {
    let out = opkit(&["--tol", "1e-12", "brownian", "--grid", "16", "--modes", "16", "--paths", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!report(&out).checks["covariance_deviation"]);
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let rect = fixture(dir.path(), "rect.json", r#"{"rows":2,"cols":3,"data":[1,2,3,4,5,6]}"#);
    let out = opkit(&["spectral", "decompose", "--matrix", path(&rect)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not square"));
    assert!(!report(&out).pass);

    let garbage = fixture(dir.path(), "garbage.json", "{not json");
    assert_eq!(opkit(&["commutant", "--generators", path(&garbage)]).status.code(), Some(2));
    assert_eq!(opkit(&["spectral", "decompose", "--matrix", "/nonexistent/m.json"]).status.code(), Some(2));
    assert_eq!(opkit(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(opkit(&["extension", "--grid", "4"]).status.code(), Some(2));
    assert_eq!(opkit(&["--help"]).status.code(), Some(0));
}
