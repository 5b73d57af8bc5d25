use serde::Serialize;

use super::{evaluate_bounds, output_dir, write_json, BoundsSummary, ExperimentConfig};
use crate::diagnostics::{DiagnosticsRecord, DiagnosticsRow};
use crate::error::Result;
use crate::integrate::{integrate_as, FormulationKind, StopReason};
use crate::lp::LPFilterBank;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub reason: StopReason,
    pub t: f64,
    pub steps: usize,
    pub failure_time: Option<f64>,
    pub n: usize,
    pub formulation: FormulationKind,
    pub initial: DiagnosticsRow,
    #[serde(rename = "final")]
    pub last: DiagnosticsRow,
    pub bounds: BoundsSummary,
}

#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub report: SimulateReport,
    pub record: DiagnosticsRecord,
}

/// Integrates the configured preset; with an output directory, writes
/// `diagnostics.csv` and `summary.json`.
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<SimulateOutput> {
    cfg.validate()?;
    let kind = cfg.single_formulation()?;
    let grid = cfg.grid()?;
    let c = cfg.coupling()?;
    let s0 = cfg.initial_state(&grid);
    let bounds = evaluate_bounds(&s0, &LPFilterBank::new(&grid), &c, &cfg.bounds);
    let out = integrate_as(&s0, kind, &cfg.controller, &c, &mut [])?;
    let rows = out.record.rows();
    let report = SimulateReport {
        reason: out.reason,
        t: out.state.time,
        steps: out.steps,
        failure_time: out.failure_time,
        n: grid.n(),
        formulation: kind,
        initial: rows[0],
        last: *rows.last().expect("record holds the initial row"),
        bounds,
    };
    if let Some(dir) = output_dir(cfg)? {
        out.record
            .write_csv(std::fs::File::create(dir.join("diagnostics.csv"))?)?;
        write_json(&dir, "summary.json", &report)?;
    }
    Ok(SimulateOutput {
        report,
        record: out.record,
    })
}
