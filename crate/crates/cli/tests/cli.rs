use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhd"))
        .args(args)
        .env("MHD_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn summary(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn counterexamples_without_config() {
    let v = summary(&mhd(&["counterexamples"]));
    assert_eq!(v["uniform_projected"]["components"][0], "1");
    assert_eq!(v["elsasser_magnetic"]["at_t1"][0], 1.0);
}

#[test]
fn simulate_writes_csv_json_and_plots() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "sim.toml",
        "scenario = \"simulate\"\n[grid]\nn = 16\n[controller]\nt_end = 0.05\n",
    );
    let out_dir = tmp.path().join("run");
    let v = summary(&mhd(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
        "--plots",
    ]));
    assert_eq!(v["reason"], "horizon");
    assert_eq!(v["n"], 16);
    for f in [
        "diagnostics.csv",
        "summary.json",
        "energy.svg",
        "besov_E.svg",
        "criterion.svg",
    ] {
        assert!(out_dir.join(f).exists(), "{f} missing");
    }
    let csv = fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("t,"));
}

#[test]
fn seed_override_changes_random_data() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "sim.toml",
        "scenario = \"simulate\"\n[grid]\nn = 16\n[preset]\nname = \"random-band\"\n[controller]\nt_end = 0.01\n",
    );
    let a = summary(&mhd(&["simulate", "--config", &cfg, "--seed", "1"]));
    let b = summary(&mhd(&["simulate", "--config", &cfg, "--seed", "2"]));
    let c = summary(&mhd(&["simulate", "--config", &cfg, "--seed", "1"]));
    assert_ne!(a["initial"], b["initial"]);
    assert_eq!(a["initial"], c["initial"]);
}

#[test]
fn scenario_mismatch_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "p.toml", "scenario = \"probes\"\n");
    let out = mhd(&["sweep", "--config", &cfg]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("probes"));
}

#[test]
fn missing_config_is_rejected() {
    let out = mhd(&["simulate"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--config"));
}

#[test]
fn bad_field_reports_its_path() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.toml",
        "scenario = \"simulate\"\n[grid]\nn = \"big\"\n",
    );
    let out = mhd(&["simulate", "--config", &cfg]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n"));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_mhd"))
        .arg("counterexamples")
        .env("MHD_THREADS", "zero")
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn equivalence_small_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "eq.toml",
        "scenario = \"equivalence\"\n[grid]\nn = 16\n[controller]\nt_end = 0.05\nfixed_dt = 0.01\n",
    );
    let v = summary(&mhd(&["equivalence", "--config", &cfg]));
    assert!(v["max_difference"].as_f64().unwrap() < 1e-10);
}
