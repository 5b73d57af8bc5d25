use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate_bounds, output_dir, write_csv_rows, write_json, ExperimentConfig};
use crate::diagnostics::{DiagnosticsRow, Regime};
use crate::error::Result;
use crate::integrate::{integrate_as, Control, StopReason};
use crate::lp::LPFilterBank;
use crate::mhd::presets::{self, PresetParams};
use crate::mhd::MhdState;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    /// First time `E(t)` reaches `growth_factor · E(0)`, linearly
    /// interpolated between steps; the horizon when it never does.
    pub t_observed: f64,
    /// `true` when the run reached the horizon without the growth.
    pub censored: bool,
    pub criterion_integral_at_t: f64,
    pub bound_n3: Option<f64>,
    pub bound_n4: Option<f64>,
    pub bound_n5: Option<f64>,
    pub regime: Regime,
    /// `(R₀, b₀) = 0`: classical Euler data, no bound applies.
    pub degenerate: bool,
    /// `bound_n5 ≤ t_observed`, recorded only for uncensored rows.
    pub n5_below_observed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub n: usize,
    pub growth_factor: f64,
    pub horizon: f64,
    pub rows: Vec<SweepRow>,
    /// `t_observed` is nondecreasing as `ε` decreases.
    pub monotone: bool,
    /// Rows where the `n = 5` bound exceeds the observed time; with `C = 1`
    /// these calibrate the constant rather than refute anything.
    pub calibration_findings: Vec<String>,
}

/// `(R₀, b₀) ↦ ε (R₀, b₀)` on the preset built with `ε = 1`.
pub fn scaled_datum(base: &MhdState, eps: f64) -> MhdState {
    MhdState {
        time: 0.0,
        r: base.r.scaled(eps),
        u: base.u.clone(),
        b: base.b.scaled(eps),
    }
}

/// For each `ε` in the configured list, integrates `ε`-scaled data until
/// `E(t)` grows by the configured factor or the horizon is reached, and
/// evaluates the 2-D lifespan bounds on the datum. Points run in parallel.
pub fn run_lifespan_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let kind = cfg.single_formulation()?;
    let grid = cfg.grid()?;
    let c = cfg.coupling()?;
    let base = presets::build(
        &grid,
        cfg.preset.name,
        &PresetParams {
            epsilon: 1.0,
            ..cfg.preset.params()
        },
    );
    let bank = LPFilterBank::new(&grid);
    let factor = cfg.sweep.growth_factor;
    let rows: Vec<SweepRow> = cfg
        .sweep
        .eps
        .par_iter()
        .map(|&eps| -> Result<SweepRow> {
            let s0 = scaled_datum(&base, eps);
            let bounds = evaluate_bounds(&s0, &bank, &c, &cfg.bounds);
            let mut prev: Option<DiagnosticsRow> = None;
            let mut crossing: Option<(f64, f64)> = None;
            // the observer keeps E(0) from its first call
            let mut e0: Option<f64> = None;
            let mut observer = |_: &MhdState, row: &DiagnosticsRow| {
                let target = factor * *e0.get_or_insert(row.besov_e);
                if row.besov_e >= target && row.t > 0.0 {
                    let p = prev.expect("a previous row exists after t = 0");
                    let w = (target - p.besov_e) / (row.besov_e - p.besov_e);
                    crossing = Some((
                        p.t + w * (row.t - p.t),
                        p.criterion_integral + w * (row.criterion_integral - p.criterion_integral),
                    ));
                    return Control::Stop;
                }
                prev = Some(*row);
                Control::Continue
            };
            let out = integrate_as(&s0, kind, &cfg.controller, &c, &mut [&mut observer])?;
            let (t_observed, integral, censored) = match (out.reason, crossing) {
                (StopReason::Observer, Some((t, i))) => (t, i, false),
                _ => {
                    let last = out.record.last().expect("record holds the initial row");
                    (last.t, last.criterion_integral, true)
                }
            };
            Ok(SweepRow {
                eps,
                t_observed,
                censored,
                criterion_integral_at_t: integral,
                bound_n3: bounds.n3,
                bound_n4: bounds.n4,
                bound_n5: bounds.n5,
                regime: bounds.regime,
                degenerate: bounds.degenerate,
                n5_below_observed: match (censored, bounds.n5) {
                    (false, Some(b)) => Some(b <= t_observed),
                    _ => None,
                },
            })
        })
        .collect::<Result<_>>()?;
    let monotone = rows.windows(2).all(|w| w[1].t_observed >= w[0].t_observed);
    let calibration_findings = rows
        .iter()
        .filter(|r| r.n5_below_observed == Some(false))
        .map(|r| {
            format!(
                "eps = {}: n = 5 bound {:.4} exceeds observed time {:.4} with C = {}",
                r.eps,
                r.bound_n5.unwrap_or(f64::NAN),
                r.t_observed,
                cfg.bounds.big_c
            )
        })
        .collect();
    let result = SweepResult {
        n: grid.n(),
        growth_factor: factor,
        horizon: cfg.controller.t_end,
        rows,
        monotone,
        calibration_findings,
    };
    if let Some(dir) = output_dir(cfg)? {
        write_csv_rows(&dir, "sweep.csv", &result.rows)?;
        write_json(&dir, "summary.json", &result)?;
    }
    Ok(result)
}
