//! Observables of a run: energies, Besov functionals, bound evaluators,
//! record checks and estimate probes.

mod bounds;
mod probes;
mod record;

use std::sync::Arc;

use serde::Serialize;

pub use bounds::{
    iterated_log, lifespan_bound_2d, lifespan_bound_for_regime, lifespan_bound_general,
    LifespanBoundInputs, Regime,
};
pub use probes::{commutator_probe, transport, vishik_probe, CommutatorReport, VishikReport};
pub use record::{DiagnosticsRecord, DiagnosticsRow, CSV_COLUMNS};

use crate::grid::{FourierGrid, SpectralField, VectorField};
use crate::lp::{BesovSpec, Integrability, LPFilterBank};
use crate::mhd::{Jacobian, MhdState, VorticityState};

fn sq(f: &SpectralField) -> f64 {
    f.inner(f)
}

fn vector_sq(v: &VectorField) -> f64 {
    sq(&v.x) + sq(&v.y)
}

/// `‖u‖² + ‖b‖²` by Parseval.
pub fn energy(s: &MhdState) -> f64 {
    vector_sq(&s.u) + vector_sq(&s.b)
}

/// `B⁰_{∞,1}` and `B¹_{∞,1}` norms of `f` from one set of shell norms.
fn b0_b1(bank: &LPFilterBank, f: &SpectralField) -> (f64, f64) {
    let norms = bank.shell_norms(f, Integrability::LInf);
    let b0 = norms.iter().sum();
    let b1 = norms
        .iter()
        .zip(bank.shells())
        .map(|(v, j)| 2f64.powi(j) * v)
        .sum();
    (b0, b1)
}

/// `E = ‖(α, β)‖_{L²} + ‖(X, Y)‖_{B⁰_{∞,1}}`.
pub fn besov_e(v: &VorticityState, bank: &LPFilterBank) -> f64 {
    besov_e_h(v, bank).0
}

/// `H = ‖R‖_{B²_{∞,1}} + ‖(α, β)‖_{L²} + ‖(X, Y)‖_{B¹_{∞,1}}`, which is
/// equivalent to `‖R‖_{B²} + ‖(α, β)‖_{L² ∩ B²}` through Biot-Savart.
pub fn besov_h(v: &VorticityState, bank: &LPFilterBank) -> f64 {
    besov_e_h(v, bank).1
}

/// `(E, H)` sharing the shell norms of `X` and `Y`.
pub fn besov_e_h(v: &VorticityState, bank: &LPFilterBank) -> (f64, f64) {
    let (la, lb) = v.elsasser_l2_norms();
    let (x0, x1) = b0_b1(bank, &v.x);
    let (y0, y1) = b0_b1(bank, &v.y);
    let r2 = bank.besov_norm(&v.r, BesovSpec::linf_one(2.0));
    (la + lb + x0 + y0, r2 + la + lb + x1 + y1)
}

/// Computes diagnostics rows on one grid.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    bank: LPFilterBank,
}

impl Diagnostics {
    pub fn new(grid: &Arc<FourierGrid>) -> Self {
        Self {
            bank: LPFilterBank::new(grid),
        }
    }

    pub fn bank(&self) -> &LPFilterBank {
        &self.bank
    }

    /// `‖∇u‖_∞ + ‖∇b‖_∞`.
    pub fn grad_sum(s: &MhdState) -> f64 {
        Jacobian::of(&s.u).linf_norm() + Jacobian::of(&s.b).linf_norm()
    }

    /// Row at `s.time`; `criterion_integral` is supplied by the integrator.
    pub fn row(&self, s: &MhdState, criterion_integral: f64) -> DiagnosticsRow {
        let e = s.to_elsasser();
        let v = e.to_vorticity();
        let (besov_e, besov_h) = besov_e_h(&v, &self.bank);
        DiagnosticsRow {
            t: s.time,
            energy: energy(s),
            elsasser_energy: 0.5 * (vector_sq(&e.alpha) + vector_sq(&e.beta)),
            linf_r: s.r.max_abs(),
            grad_linf_u: Jacobian::of(&s.u).linf_norm(),
            grad_linf_b: Jacobian::of(&s.b).linf_norm(),
            criterion_integral,
            besov_e,
            besov_h,
            mean_alpha: e.alpha.mean(),
            mean_beta: e.beta.mean(),
        }
    }
}

/// First sample at which a record check fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub t: f64,
    pub measured: f64,
    pub allowed: f64,
}

/// Outcome of a record check. `worst` is the largest measured-over-allowed
/// ratio for bounds, or the largest relative deviation for conservation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckReport {
    pub worst: f64,
    pub violation: Option<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Energy check on a record.
///
/// With `skew`, requires `|E(t) - E(0)| / E(0) < tol` (absolute when
/// `E(0) = 0`). Otherwise requires
/// `√(‖u‖² + ‖b‖²)(t) ≤ √E(0) · exp(c ‖R₀‖_∞ t) · (1 + tol)`
/// with `‖R₀‖_∞` read from the first row and `c` the operator norm of the
/// coupling matrix.
pub fn energy_bound_check(rec: &DiagnosticsRecord, c: f64, skew: bool, tol: f64) -> CheckReport {
    let Some(first) = rec.first() else {
        return CheckReport {
            worst: 0.0,
            violation: None,
        };
    };
    let e0 = first.energy;
    let mut worst: f64 = 0.0;
    let mut violation = None;
    for row in rec.rows() {
        let (measured, allowed, fails) = if skew {
            let drift = if e0 > 0.0 {
                (row.energy - e0).abs() / e0
            } else {
                row.energy.abs()
            };
            worst = worst.max(drift);
            (drift, tol, !(drift < tol))
        } else {
            let measured = row.energy.sqrt();
            let allowed = e0.sqrt() * (c * first.linf_r * row.t).exp() * (1.0 + tol);
            if allowed > 0.0 {
                worst = worst.max(measured / allowed);
            }
            (measured, allowed, !(measured <= allowed))
        };
        if fails && violation.is_none() {
            violation = Some(Violation {
                t: row.t,
                measured,
                allowed,
            });
        }
    }
    CheckReport { worst, violation }
}

/// Requires `|‖R(t)‖_∞ - ‖R₀‖_∞| ≤ tol ‖R₀‖_∞` at every row.
pub fn linf_r_check(rec: &DiagnosticsRecord, tol: f64) -> CheckReport {
    let Some(first) = rec.first() else {
        return CheckReport {
            worst: 0.0,
            violation: None,
        };
    };
    let r0 = first.linf_r;
    let mut worst: f64 = 0.0;
    let mut violation = None;
    for row in rec.rows() {
        let dev = (row.linf_r - r0).abs();
        let allowed = tol * r0;
        if r0 > 0.0 {
            worst = worst.max(dev / r0);
        }
        if !(dev <= allowed) && violation.is_none() {
            violation = Some(Violation {
                t: row.t,
                measured: row.linf_r,
                allowed,
            });
        }
    }
    CheckReport { worst, violation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhd::presets::{build, random_band_scalar, random_solenoidal, Preset, PresetParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn row(t: f64, energy: f64, linf_r: f64) -> DiagnosticsRow {
        DiagnosticsRow {
            t,
            energy,
            elsasser_energy: energy,
            linf_r,
            grad_linf_u: 0.0,
            grad_linf_b: 0.0,
            criterion_integral: 0.0,
            besov_e: 0.0,
            besov_h: 0.0,
            mean_alpha: [0.0; 2],
            mean_beta: [0.0; 2],
        }
    }

    #[test]
    fn energy_cases() {
        let g = FourierGrid::shared(16).unwrap();
        let u = VectorField::from_fn(&g, |x, _| x.sin(), |_, _| 0.0);
        let s = MhdState::new(SpectralField::zeros(&g), u, VectorField::zeros(&g));
        assert!((energy(&s) - 2.0 * PI * PI).abs() < 1e-12);
        assert_eq!(energy(&MhdState::zeros(&g)), 0.0);
    }

    #[test]
    fn energy_equals_elsasser_form() {
        let g = FourierGrid::shared(32).unwrap();
        let d = Diagnostics::new(&g);
        for preset in Preset::ALL {
            let s = build(&g, preset, &PresetParams::default());
            let r = d.row(&s, 0.0);
            assert!(
                (r.energy - r.elsasser_energy).abs() <= 1e-12 * r.energy,
                "{preset}"
            );
        }
    }

    #[test]
    fn besov_functionals_single_mode() {
        // α = (0, sin 4x), β = 0: X = 4 cos 4x lies in shell 2 only
        let g = FourierGrid::shared(32).unwrap();
        let bank = LPFilterBank::new(&g);
        let alpha = VectorField::from_fn(&g, |_, _| 0.0, |x, _| (4.0 * x).sin());
        let zero = VectorField::zeros(&g);
        let s = MhdState::new(
            SpectralField::zeros(&g),
            alpha.scaled(0.5),
            alpha.scaled(0.5),
        );
        let v = s.to_vorticity();
        let l2 = PI * 2f64.sqrt();
        assert!((besov_e(&v, &bank) - (l2 + 4.0)).abs() < 1e-12);
        assert!((besov_h(&v, &bank) - (l2 + 16.0)).abs() < 1e-12);
        let z = MhdState::new(SpectralField::zeros(&g), zero.clone(), zero).to_vorticity();
        assert_eq!(besov_e_h(&z, &bank), (0.0, 0.0));
    }

    #[test]
    fn besov_e_is_homogeneous_and_below_h() {
        let g = FourierGrid::shared(32).unwrap();
        let bank = LPFilterBank::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut kappa: f64 = 0.0;
        for _ in 0..20 {
            let s = MhdState::new(
                random_band_scalar(&g, 8.0, 1.0, &mut rng),
                random_solenoidal(&g, 8.0, &mut rng),
                random_solenoidal(&g, 8.0, &mut rng),
            );
            let v = s.to_vorticity();
            let (e, h) = besov_e_h(&v, &bank);
            let e3 = besov_e(&v.scaled(3.0), &bank);
            assert!((e3 - 3.0 * e).abs() < 1e-12 * e);
            kappa = kappa.max(e / h);
        }
        // mean-free curls put no mass on shell -1, so E ≤ H with κ = 1
        assert!(kappa <= 1.0, "{kappa}");
    }

    #[test]
    fn energy_check_flags_first_violation() {
        let rec = DiagnosticsRecord::from_rows(vec![
            row(0.0, 1.0, 1.0),
            row(0.5, 1.0, 1.0),
            row(1.0, 1.0, 1.0),
        ]);
        assert!(energy_bound_check(&rec, 1.0, true, 1e-12).passed());
        assert!(energy_bound_check(&rec, 1.0, false, 0.0).passed());
        // growth e^{t} allowed in norm, so energy may reach e^{2t}
        let ok = DiagnosticsRecord::from_rows(vec![row(0.0, 1.0, 1.0), row(1.0, 7.0, 1.0)]);
        assert!(energy_bound_check(&ok, 1.0, false, 0.0).passed());
        let bad = DiagnosticsRecord::from_rows(vec![
            row(0.0, 1.0, 1.0),
            row(0.5, 1.5, 1.0),
            row(1.0, 8.0, 1.0),
            row(1.5, 30.0, 1.0),
        ]);
        let rep = energy_bound_check(&bad, 1.0, false, 1e-3);
        assert_eq!(rep.violation.unwrap().t, 1.0);
        let rep = energy_bound_check(&bad, 1.0, true, 1e-3);
        assert_eq!(rep.violation.unwrap().t, 0.5);
        assert!((rep.worst - 29.0).abs() < 1e-12);
    }

    #[test]
    fn linf_r_check_cases() {
        let flat = DiagnosticsRecord::from_rows(vec![row(0.0, 1.0, 0.0), row(1.0, 1.0, 0.0)]);
        assert!(linf_r_check(&flat, 0.0).passed());
        let bad = DiagnosticsRecord::from_rows(vec![
            row(0.0, 1.0, 1.0),
            row(0.5, 1.0, 1.0005),
            row(1.0, 1.0, 1.01),
        ]);
        let rep = linf_r_check(&bad, 1e-3);
        assert_eq!(rep.violation.unwrap().t, 1.0);
    }
}
