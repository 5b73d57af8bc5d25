//! Named experiments driven by an [`ExperimentConfig`].

mod config;
mod counterexamples;
mod equivalence;
mod iteration;
pub mod poly;
mod probes;
mod simulate;
mod sweep;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{
    BoundsConfig, CouplingConfig, CouplingKind, EquivalenceConfig, ExperimentConfig,
    FormulationChoice, GridConfig, IterationConfig, OutputConfig, PresetConfig, ProbeConfig,
    ScenarioName, SweepConfig,
};
pub use counterexamples::{
    counterexamples_for, leray_by_composition, run_counterexamples, CounterexampleReport, Residual,
};
pub use equivalence::{run_equivalence, EquivalenceReport};
pub use iteration::{run_iteration_scheme, IterationReport};
pub use probes::{run_probes, BernsteinRow, ProbesReport};
pub use simulate::{run_simulate, SimulateOutput, SimulateReport};
pub use sweep::{run_lifespan_sweep, SweepResult, SweepRow};

use crate::diagnostics::{lifespan_bound_2d, lifespan_bound_general, LifespanBoundInputs, Regime};
use crate::error::{Error, Result};
use crate::lp::{BesovSpec, LPFilterBank};
use crate::mhd::{CouplingMatrix, MhdState};

/// Lifespan bounds of a datum with the configured constants. A bound that
/// cannot be evaluated is `None`, with the reason in `note`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsSummary {
    pub regime: Regime,
    pub inputs: LifespanBoundInputs,
    pub general: Option<f64>,
    pub n3: Option<f64>,
    pub n4: Option<f64>,
    pub n5: Option<f64>,
    /// Bound for the regime's own iteration count.
    pub regime_bound: Option<f64>,
    /// `true` when `(R₀, b₀) = 0`: the classical Euler regime.
    pub degenerate: bool,
    pub note: Option<String>,
}

pub fn evaluate_bounds(
    s: &MhdState,
    bank: &LPFilterBank,
    c: &CouplingMatrix,
    b: &BoundsConfig,
) -> BoundsSummary {
    let inputs =
        LifespanBoundInputs::from_state(s, bank, BesovSpec::linf_one(b.s), b.big_c, b.small_c);
    let regime = Regime::classify(s, c);
    let mut note = None;
    let mut keep = |r: Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            note.get_or_insert(e.to_string());
            None
        }
    };
    let general = keep(lifespan_bound_general(&inputs));
    let [n3, n4, n5] = [3, 4, 5].map(|n| keep(lifespan_bound_2d(&inputs, n)));
    let regime_bound = match regime.iterations() {
        3 => n3,
        4 => n4,
        _ => n5,
    };
    BoundsSummary {
        regime,
        inputs,
        general,
        n3,
        n4,
        n5,
        regime_bound,
        degenerate: inputs.norm_rb0_b1 == 0.0,
        note,
    }
}

/// Creates the output directory when one is configured.
fn output_dir(cfg: &ExperimentConfig) -> Result<Option<PathBuf>> {
    match &cfg.output.dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let f = BufWriter::new(File::create(dir.join(name))?);
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

fn write_csv_rows<T: Serialize>(dir: &Path, name: &str, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join(name))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the configured scenario and writes its artifacts; returns the JSON
/// summary.
pub fn run(cfg: &ExperimentConfig) -> Result<serde_json::Value> {
    cfg.validate()?;
    let value = match cfg.scenario {
        ScenarioName::Simulate => serde_json::to_value(run_simulate(cfg)?.report)?,
        ScenarioName::Equivalence => serde_json::to_value(run_equivalence(cfg)?)?,
        ScenarioName::Sweep => serde_json::to_value(run_lifespan_sweep(cfg)?)?,
        ScenarioName::Counterexamples => {
            let rep = run_counterexamples();
            if let Some(dir) = output_dir(cfg)? {
                write_json(&dir, "counterexamples.json", &rep)?;
            }
            serde_json::to_value(rep)?
        }
        ScenarioName::Iterate => serde_json::to_value(run_iteration_scheme(cfg)?)?,
        ScenarioName::Probes => serde_json::to_value(run_probes(cfg)?)?,
    };
    Ok(value)
}

fn require(cond: bool, path: &str, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::config(path, msg))
    }
}
