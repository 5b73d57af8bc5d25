use serde::Serialize;

use super::{output_dir, require, write_csv_rows, write_json, ExperimentConfig, FormulationChoice};
use crate::error::Result;
use crate::integrate::{adaptive_dt, rk4_step, Formulation};
use crate::mhd::{EulerState, MhdState};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceSample {
    pub t: f64,
    pub primitive_elsasser: f64,
    pub primitive_vorticity: f64,
    pub elsasser_vorticity: f64,
    /// `u` of the primitive path against an Euler run, when `b₀ = 0` and
    /// the density does not act.
    pub euler: Option<f64>,
}

impl EquivalenceSample {
    pub fn max_pairwise(&self) -> f64 {
        self.primitive_elsasser
            .max(self.primitive_vorticity)
            .max(self.elsasser_vorticity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub t_end: f64,
    pub dt: f64,
    pub samples: Vec<EquivalenceSample>,
    /// Largest sup-norm difference of `(u, b)` over pairs and samples.
    pub max_difference: f64,
    pub euler_difference: Option<f64>,
}

/// Evolves the configured data through the primitive, Elsässer and
/// vorticity right-hand sides with one common fixed step and compares the
/// reconstructed `(u, b)` at evenly spaced times. Without `fixed_dt` the
/// step is the CFL step of the initial state.
pub fn run_equivalence(cfg: &ExperimentConfig) -> Result<EquivalenceReport> {
    cfg.validate()?;
    require(
        cfg.formulation() == FormulationChoice::All,
        "formulation",
        "equivalence compares all formulations",
    )?;
    let grid = cfg.grid()?;
    let c = cfg.coupling()?;
    let s0 = cfg.initial_state(&grid);
    let ctrl = &cfg.controller;
    let t_end = ctrl.t_end;
    let dt_target = ctrl.fixed_dt.unwrap_or_else(|| {
        let probe = crate::integrate::StepController {
            t_end: f64::INFINITY,
            ..*ctrl
        };
        adaptive_dt(&s0, &probe)
    });
    let steps = if t_end > 0.0 {
        (t_end / dt_target).ceil().max(1.0) as usize
    } else {
        0
    };
    let dt = if steps > 0 { t_end / steps as f64 } else { 0.0 };
    let n_samples = cfg.equivalence.samples;
    let sample_at: Vec<usize> = (0..=n_samples)
        .map(|k| ((k * steps) as f64 / n_samples as f64).round() as usize)
        .collect();

    let with_euler = s0.b.max_abs() == 0.0 && (s0.r.max_abs() == 0.0 || c.is_zero());
    let mut p = s0.clone();
    let mut e = s0.to_elsasser();
    let mut v = s0.to_vorticity();
    let mut eu = EulerState {
        time: 0.0,
        u: s0.u.clone(),
    };
    let mut samples = Vec::new();
    let compare =
        |p: &MhdState, pe: &MhdState, pv: &MhdState, eu: &EulerState, t: f64| EquivalenceSample {
            t,
            primitive_elsasser: p.max_difference(pe),
            primitive_vorticity: p.max_difference(pv),
            elsasser_vorticity: pe.max_difference(pv),
            euler: with_euler.then(|| p.u.max_difference(&eu.u)),
        };
    let mut next_sample = 0;
    for step in 0..=steps {
        while next_sample < sample_at.len() && sample_at[next_sample] == step {
            let t = step as f64 * dt;
            samples.push(compare(&p, &e.to_primitive(), &v.to_primitive()?, &eu, t));
            next_sample += 1;
        }
        if step == steps {
            break;
        }
        p = rk4_step(&p, dt, &c)?;
        e = rk4_step(&e, dt, &c)?;
        v = rk4_step(&v, dt, &c)?;
        if with_euler {
            eu = rk4_step(&eu, dt, &c)?;
        }
        debug_assert_eq!(p.time(), e.time());
    }
    let max_difference = samples.iter().map(|s| s.max_pairwise()).fold(0.0, f64::max);
    let euler_difference =
        with_euler.then(|| samples.iter().filter_map(|s| s.euler).fold(0.0, f64::max));
    let report = EquivalenceReport {
        n: grid.n(),
        t_end,
        dt,
        samples,
        max_difference,
        euler_difference,
    };
    if let Some(dir) = output_dir(cfg)? {
        write_csv_rows(&dir, "equivalence.csv", &report.samples)?;
        write_json(&dir, "summary.json", &report)?;
    }
    Ok(report)
}
