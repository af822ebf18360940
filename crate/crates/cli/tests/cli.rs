use serde_json::Value;
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .unwrap()
}

fn report(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn pentagon_passes() {
    let out = verify(&["pentagon", "--group", "Z2^3", "--cocycle", "octonion"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["pass"], true);
    assert_eq!(r["suite"], "pentagon");
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
}

#[test]
fn unknown_suite_is_a_config_error() {
    let out = verify(&["nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("pentagon"));
}

#[test]
fn bad_theta_is_a_config_error() {
    let out = verify(&["pentagon", "--cocycle", "volume", "--theta", "one half"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mutation_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let out = verify(&[
        "pentagon",
        "--cocycle",
        "octonion",
        "--mutate",
        "--json",
        p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&p);
    assert_eq!(r["pass"], false);
    assert!(!r["witness"].is_null());
}

#[test]
fn report_is_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = verify(&[
            "kernels",
            "--trials",
            "3",
            "--seed",
            "7",
            "--json",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut r = report(&p);
        r.as_object_mut().unwrap().remove("timing_ms");
        r
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "group = \"Z3^3\"\ncocycle = \"volume\"\ntheta = \"1/3\"\ntrials = 2\nseed = 11\n",
    )
    .unwrap();
    let out = verify(&["pentagon", "--config", cfg.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["config"]["group"], "Z3^3");
    assert_eq!(r["config"]["seed"], 11);

    let out = verify(&["pentagon", "--config", cfg.to_str().unwrap(), "--seed", "5"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["config"]["seed"], 5);

    std::fs::write(&cfg, "nonsense = 1\n").unwrap();
    assert_eq!(
        verify(&["pentagon", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dump_kernels_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("k.json");
    let out = verify(&[
        "kernels",
        "--trials",
        "2",
        "--dump-kernels",
        p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert!(!v.is_null());
}
