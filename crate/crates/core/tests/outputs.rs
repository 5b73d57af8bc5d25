use std::fs::File;

use mhd_core::diagnostics::{DiagnosticsRecord, CSV_COLUMNS};
use mhd_core::scenarios::{run, run_simulate, ExperimentConfig, ScenarioName};

fn small(scenario: ScenarioName, dir: &std::path::Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(scenario);
    cfg.grid.n = 16;
    cfg.controller.t_end = 0.05;
    cfg.output.dir = Some(dir.to_path_buf());
    cfg
}

#[test]
fn simulate_csv_roundtrips() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small(ScenarioName::Simulate, tmp.path());
    let out = run_simulate(&cfg).unwrap();
    let back = DiagnosticsRecord::read_csv(File::open(tmp.path().join("diagnostics.csv")).unwrap())
        .unwrap();
    assert_eq!(back.len(), out.record.len());
    for (a, b) in back.rows().iter().zip(out.record.rows()) {
        assert_eq!(a, b);
    }
    let text = std::fs::read_to_string(tmp.path().join("diagnostics.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
    let summary: serde_json::Value =
        serde_json::from_reader(File::open(tmp.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["reason"], "horizon");
}

#[test]
fn every_scenario_writes_its_files() {
    let cases = [
        (
            ScenarioName::Equivalence,
            &["equivalence.csv", "summary.json"][..],
        ),
        (ScenarioName::Counterexamples, &["counterexamples.json"][..]),
        (ScenarioName::Iterate, &["iterates.csv", "summary.json"][..]),
        (ScenarioName::Sweep, &["sweep.csv", "summary.json"][..]),
    ];
    for (scenario, files) in cases {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = small(scenario, tmp.path());
        cfg.iteration.iterations = 4;
        let value = run(&cfg).unwrap();
        assert!(value.is_object(), "{scenario}");
        for f in files {
            assert!(tmp.path().join(f).exists(), "{scenario}: {f}");
        }
    }
}

#[test]
fn probes_write_their_files() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = small(ScenarioName::Probes, tmp.path());
    cfg.probes.t_end = 0.1;
    run(&cfg).unwrap();
    for f in [
        "bernstein.csv",
        "vishik.csv",
        "commutator.csv",
        "summary.json",
    ] {
        assert!(tmp.path().join(f).exists(), "{f}");
    }
}
