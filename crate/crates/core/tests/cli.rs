use std::path::PathBuf;
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("homflow-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(dir: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homflow")).current_dir(dir).args(args).output().unwrap()
}

fn json(path: PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn solve_axi_then_verify() {
    let d = workdir("axi");
    let out = run(&d, &["solve-axi", "--alpha", "4", "--C1", "0", "--C2", "1", "--out", "w.csv", "--meta", "m.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let meta = json(d.join("m.json"));
    assert_eq!(meta["subcommand"], "solve-axi");
    assert!(meta["result"]["residual_certificate"].as_f64().unwrap() < 1e-8);
    let csv = std::fs::read_to_string(d.join("w.csv")).unwrap();
    assert!(csv.starts_with("t,w,dw,d2w\n"));
    assert_eq!(csv.lines().count(), 2002);

    let out = run(&d, &["verify", "--field", "m.json", "--checks", "euler,gs,sphere,beltrami", "--report", "r.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(d.join("r.json"));
    let text = report.to_string();
    for name in ["euler.momentum", "grad_shafranov", "sphere.radial", "beltrami"] {
        assert!(text.contains(name), "{name} missing from {text}");
    }
}

#[test]
fn rerun_from_config_is_identical() {
    let d = workdir("rerun");
    let out = run(&d, &["solve-axi", "--alpha", "2.5", "--C1", "-1", "--out", "a.csv", "--meta", "m.json"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&d, &["solve-axi", "--config", "m.json", "--out", "b.csv", "--meta", "n.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(d.join("a.csv")).unwrap(), std::fs::read(d.join("b.csv")).unwrap());
}

#[test]
fn excluded_alpha_is_a_parameter_error() {
    let d = workdir("excluded");
    let out = run(&d, &["solve-axi", "--alpha", "1.5", "--C2", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[0,2]"));
}

#[test]
fn usage_errors_exit_64() {
    let d = workdir("usage");
    assert_eq!(run(&d, &["bogus"]).status.code(), Some(64));
    assert_eq!(run(&d, &["eigen", "--nope", "1"]).status.code(), Some(64));
    assert_eq!(run(&d, &[]).status.code(), Some(64));
}

#[test]
fn eigen_kernel_at_integer_beta() {
    let d = workdir("eigen");
    let out = run(&d, &["eigen", "--beta", "2", "--modes", "128", "--json", "e.json"]);
    assert_eq!(out.status.code(), Some(0));
    let e = json(d.join("e.json"));
    let mu: Vec<f64> = e["eigenvalues"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!(mu.iter().any(|v| v.abs() < 1e-8));
    assert_eq!(e["M"], 128);
    assert_eq!(e["split_index"], 2);
    assert_eq!(run(&d, &["eigen", "--beta", "-1"]).status.code(), Some(2));
}

#[test]
fn solve_2d_and_levelset() {
    let d = workdir("planar");
    let out = run(&d, &["solve-2d", "--alpha", "1.5", "--C2", "1", "--out", "w.csv", "--meta", "m.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&d, &["verify", "--field", "m.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let out = run(&d, &["catalog", "--family", "axi", "--n", "1", "--profile-out", "w2.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&d, &["levelset", "--profile", "w2.csv", "--beta", "1", "--levels", "0.5", "--csv", "l.csv", "--svg", "l.svg"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("jordan_curve"));
    let csv = std::fs::read_to_string(d.join("l.csv")).unwrap();
    assert!(csv.starts_with("level,branch,theta,z,r\n"));
    // w_2 at C = 1/2 is the circle ρ = sin²θ
    for line in csv.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let rho = v[3].hypot(v[4]);
        assert!((rho - v[2].sin().powi(2)).abs() < 1e-6, "{line}");
    }
    assert!(std::fs::read_to_string(d.join("l.svg")).unwrap().contains("<svg"));
}

#[test]
fn catalog_fields_verify() {
    let d = workdir("catalog");
    for args in [
        vec!["catalog", "--family", "axi", "--n", "2", "--meta", "m.json"],
        vec!["catalog", "--family", "2d", "--n", "-2", "--meta", "m.json"],
        vec!["catalog", "--family", "geodesic", "--meta", "m.json"],
        vec!["catalog", "--family", "circular", "--a", "1", "--alpha", "2", "--meta", "m.json"],
    ] {
        let out = run(&d, &args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let out = run(&d, &["verify", "--field", "m.json"]);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = run(&d, &["catalog", "--family", "axi", "--n", "-1"]);
    assert_ne!(out.status.code(), Some(0));
}
