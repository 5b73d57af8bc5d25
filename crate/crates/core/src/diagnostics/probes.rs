//! Transport probes. They measure; they do not assert constants.

use serde::Serialize;

use crate::grid::{SpectralField, VectorField};
use crate::lp::probes::advect;
use crate::lp::{transport_commutator_block, BesovSpec, LPFilterBank};
use crate::mhd::Jacobian;

/// RK4 for `∂ₜf + v(t)·∇f = 0` over `[0, t_end]` with step at most `dt`.
/// Calls `visit(t, f, v(t))` at `t = 0` and after every step.
fn transport_with(
    velocity: &dyn Fn(f64) -> VectorField,
    f0: &SpectralField,
    dt: f64,
    t_end: f64,
    mut visit: impl FnMut(f64, &SpectralField, &VectorField),
) -> SpectralField {
    let steps = (t_end / dt).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let mut f = f0.clone();
    let mut v0 = velocity(0.0);
    visit(0.0, &f, &v0);
    for step in 0..steps {
        let t = step as f64 * h;
        let vm = velocity(t + 0.5 * h);
        let v1 = velocity(t + h);
        let k1 = advect(&v0, &f).scaled(-1.0);
        let k2 = advect(&vm, &f.axpy(0.5 * h, &k1)).scaled(-1.0);
        let k3 = advect(&vm, &f.axpy(0.5 * h, &k2)).scaled(-1.0);
        let k4 = advect(&v1, &f.axpy(h, &k3)).scaled(-1.0);
        let incr = k1.add(&k2.scaled(2.0)).add(&k3.scaled(2.0)).add(&k4);
        f = f.axpy(h / 6.0, &incr);
        visit(t + h, &f, &v1);
        v0 = v1;
    }
    f
}

/// Passive transport of `f0` by `velocity` to `t_end`.
pub fn transport(
    velocity: &dyn Fn(f64) -> VectorField,
    f0: &SpectralField,
    dt: f64,
    t_end: f64,
) -> SpectralField {
    transport_with(velocity, f0, dt, t_end, |_, _, _| {})
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VishikReport {
    pub times: Vec<f64>,
    /// `‖f(t)‖_{B⁰_{∞,1}} / (‖f₀‖_{B⁰_{∞,1}} (1 + ∫₀ᵗ ‖∇v‖_∞))`.
    pub ratio: Vec<f64>,
    /// `‖f(t)‖_{B¹_{∞,1}} / ‖f₀‖_{B¹_{∞,1}}`, for contrast.
    pub b1_growth: Vec<f64>,
    pub max_ratio: f64,
}

/// Transports `f0` by the divergence-free `velocity` and records how the
/// `B⁰_{∞,1}` norm grows against `1 + ∫‖∇v‖_∞`. The integral uses the
/// trapezoid rule on the step times.
pub fn vishik_probe(
    velocity: &dyn Fn(f64) -> VectorField,
    f0: &SpectralField,
    bank: &LPFilterBank,
    dt: f64,
    t_end: f64,
) -> VishikReport {
    let b0 = BesovSpec::linf_one(0.0);
    let b1 = BesovSpec::linf_one(1.0);
    let n0 = bank.besov_norm(f0, b0);
    let n1 = bank.besov_norm(f0, b1);
    let mut rep = VishikReport {
        times: Vec::new(),
        ratio: Vec::new(),
        b1_growth: Vec::new(),
        max_ratio: 0.0,
    };
    let mut integral = 0.0;
    let mut last: Option<(f64, f64)> = None;
    transport_with(velocity, f0, dt, t_end, |t, f, v| {
        let g = Jacobian::of(v).linf_norm();
        if let Some((t_prev, g_prev)) = last {
            integral += 0.5 * (t - t_prev) * (g + g_prev);
        }
        last = Some((t, g));
        let ratio = bank.besov_norm(f, b0) / (n0 * (1.0 + integral));
        rep.times.push(t);
        rep.ratio.push(ratio);
        rep.b1_growth.push(bank.besov_norm(f, b1) / n1);
        rep.max_ratio = rep.max_ratio.max(ratio);
    });
    rep
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub shells: Vec<i32>,
    /// `‖[v·∇, Δⱼ]f‖_∞ / (‖∇v‖_∞‖f‖_{B⁰_{∞,1}} + ‖∇v‖_{B⁰_{∞,1}}‖f‖_∞)`.
    pub values: Vec<f64>,
    pub l1_sum: f64,
}

/// Per-shell commutator sizes at regularity `s = 1`. The Besov norm of
/// `∇v` sums its four entries; a vanishing denominator gives zeros.
pub fn commutator_probe(
    v: &VectorField,
    f: &SpectralField,
    bank: &LPFilterBank,
) -> CommutatorReport {
    let b0 = BesovSpec::linf_one(0.0);
    let jac = Jacobian::of(v);
    let grad_inf = jac.linf_norm();
    let grad_b0: f64 = jac.d.iter().flatten().map(|d| bank.besov_norm(d, b0)).sum();
    let denom = grad_inf * bank.besov_norm(f, b0) + grad_b0 * f.max_abs();
    let shells: Vec<i32> = bank.shells().collect();
    let values: Vec<f64> = shells
        .iter()
        .map(|&j| {
            if denom > 0.0 {
                let c = transport_commutator_block(bank, v, f, j).expect("shell in range");
                c.max_abs() / denom
            } else {
                0.0
            }
        })
        .collect();
    CommutatorReport {
        l1_sum: values.iter().sum(),
        shells,
        values,
    }
}
