//! Right-hand sides of the three formulations, the operator `L` and the
//! pressure. Quadratic terms are formed pointwise from samples and brought
//! back with the 2/3-rule mask; transport terms use the conservative form
//! `div(a ⊗ c)ᵢ = Σⱼ ∂ⱼ(aⱼ cᵢ)`.

use std::sync::Arc;

use num_complex::Complex64;

use super::coupling::CouplingMatrix;
use super::state::{
    remove_mean, ElsasserState, EulerState, Jacobian, MhdState, PressureFields, VorticityState,
};
use crate::error::Result;
use crate::grid::{derivative, leray_project, Axis, FourierGrid, SpectralField, VectorField};

fn forward2(grid: &Arc<FourierGrid>, a: &[f64], b: &[f64]) -> (SpectralField, SpectralField) {
    let (mut ca, mut cb) = grid.forward_pair(a, b);
    grid.apply_mask(&mut ca);
    grid.apply_mask(&mut cb);
    (
        SpectralField::from_coeffs(grid, ca),
        SpectralField::from_coeffs(grid, cb),
    )
}

fn dx(f: &SpectralField) -> SpectralField {
    derivative(f, Axis::X)
}

fn dy(f: &SpectralField) -> SpectralField {
    derivative(f, Axis::Y)
}

/// `∂₁a + ∂₂b`.
fn div2(a: &SpectralField, b: &SpectralField) -> SpectralField {
    dx(a).add(&dy(b))
}

fn zip_map(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// Samples of `R 𝔠 h`.
fn coupling_samples(r: &[f64], h1: &[f64], h2: &[f64], c: &CouplingMatrix) -> (Vec<f64>, Vec<f64>) {
    let mut g1 = Vec::with_capacity(r.len());
    let mut g2 = Vec::with_capacity(r.len());
    for i in 0..r.len() {
        let [a, b] = c.apply([h1[i], h2[i]]);
        g1.push(r[i] * a);
        g2.push(r[i] * b);
    }
    (g1, g2)
}

/// Primitive system, in projected form:
/// `∂ₜR = -div(Ru)`, `∂ₜu = -P(div(u⊗u - b⊗b) + R𝔠u)`, `∂ₜb = -div(u⊗b - b⊗u)`.
pub fn rhs_primitive(s: &MhdState, c: &CouplingMatrix) -> MhdState {
    let grid = s.grid();
    let r = s.r.samples();
    let (u1, u2) = s.u.samples();
    let (b1, b2) = s.b.samples();

    let (fr1, fr2) = forward2(
        grid,
        &zip_map(&r, &u1, |a, b| a * b),
        &zip_map(&r, &u2, |a, b| a * b),
    );
    let t11: Vec<f64> = (0..r.len())
        .map(|i| u1[i] * u1[i] - b1[i] * b1[i])
        .collect();
    let t12: Vec<f64> = (0..r.len())
        .map(|i| u1[i] * u2[i] - b1[i] * b2[i])
        .collect();
    let t22: Vec<f64> = (0..r.len())
        .map(|i| u2[i] * u2[i] - b2[i] * b2[i])
        .collect();
    // in 2-D the induction term is the rotated gradient of E = u₁b₂ - u₂b₁
    let e: Vec<f64> = (0..r.len())
        .map(|i| u1[i] * b2[i] - u2[i] * b1[i])
        .collect();
    let (g1, g2) = coupling_samples(&r, &u1, &u2, c);

    let (t11, t12) = forward2(grid, &t11, &t12);
    let (t22, e) = forward2(grid, &t22, &e);
    let (g1, g2) = forward2(grid, &g1, &g2);

    let force = VectorField::new(div2(&t11, &t12).add(&g1), div2(&t12, &t22).add(&g2));
    MhdState {
        time: s.time,
        r: div2(&fr1, &fr2).scaled(-1.0),
        u: leray_project(&force).scaled(-1.0),
        b: VectorField::new(dy(&e), dx(&e).scaled(-1.0)),
    }
}

/// Products `Mᵢⱼ = αᵢβⱼ` and the coupling `G = ½R𝔠(α+β)`, all dealiased.
struct ElsasserTerms {
    flux: (SpectralField, SpectralField),
    m: [[SpectralField; 2]; 2],
    g: (SpectralField, SpectralField),
}

fn elsasser_terms(
    r: &SpectralField,
    alpha: &VectorField,
    beta: &VectorField,
    c: &CouplingMatrix,
) -> ElsasserTerms {
    let grid = r.grid();
    let r = r.samples();
    let (a1, a2) = alpha.samples();
    let (b1, b2) = beta.samples();
    let h1 = zip_map(&a1, &b1, |a, b| 0.5 * (a + b));
    let h2 = zip_map(&a2, &b2, |a, b| 0.5 * (a + b));
    let flux = forward2(
        grid,
        &zip_map(&r, &h1, |a, b| a * b),
        &zip_map(&r, &h2, |a, b| a * b),
    );
    let (m11, m12) = forward2(
        grid,
        &zip_map(&a1, &b1, |a, b| a * b),
        &zip_map(&a1, &b2, |a, b| a * b),
    );
    let (m21, m22) = forward2(
        grid,
        &zip_map(&a2, &b1, |a, b| a * b),
        &zip_map(&a2, &b2, |a, b| a * b),
    );
    let (g1, g2) = coupling_samples(&r, &h1, &h2, c);
    ElsasserTerms {
        flux,
        m: [[m11, m12], [m21, m22]],
        g: forward2(grid, &g1, &g2),
    }
}

/// Elsässer system:
/// `∂ₜR = -½div(R(α+β))`, `∂ₜα = -P div(β⊗α) - ½P(R𝔠(α+β))`, and the same
/// for `β` with `α ⊗ β`.
pub fn rhs_elsasser(e: &ElsasserState, c: &CouplingMatrix) -> ElsasserState {
    let t = elsasser_terms(&e.r, &e.alpha, &e.beta, c);
    let [[m11, m12], [m21, m22]] = &t.m;
    // div(β⊗α)ᵢ = Σⱼ ∂ⱼ(αᵢβⱼ) = Σⱼ ∂ⱼMᵢⱼ, div(α⊗β)ᵢ = Σⱼ ∂ⱼMⱼᵢ
    let fa = VectorField::new(div2(m11, m12).add(&t.g.0), div2(m21, m22).add(&t.g.1));
    let fb = VectorField::new(div2(m11, m21).add(&t.g.0), div2(m12, m22).add(&t.g.1));
    ElsasserState {
        time: e.time,
        r: div2(&t.flux.0, &t.flux.1).scaled(-1.0),
        alpha: leray_project(&fa).scaled(-1.0),
        beta: leray_project(&fb).scaled(-1.0),
    }
}

/// Scalar `L(∇α, ∇β) = ∂₁α₁(∂₁β₂ + ∂₂β₁) + ∂₂β₂(∂₁α₂ + ∂₂α₁)` from samples of
/// the two Jacobians (entry order `d11, d12, d21, d22`).
fn l_samples(a: &[Vec<f64>; 4], b: &[Vec<f64>; 4]) -> Vec<f64> {
    (0..a[0].len())
        .map(|i| a[0][i] * (b[2][i] + b[1][i]) + b[3][i] * (a[2][i] + a[1][i]))
        .collect()
}

/// The 2-D operator `L`, dealiased.
pub fn l_operator(grad_a: &Jacobian, grad_b: &Jacobian) -> SpectralField {
    let grid = grad_a.d[0][0].grid();
    SpectralField::from_samples_dealiased(grid, &l_samples(&grad_a.samples(), &grad_b.samples()))
}

/// `max |L(∇(u+b), ∇(u-b)) + 2L(∇u, ∇b)|` over samples.
pub fn l_identity_check(u: &VectorField, b: &VectorField) -> f64 {
    let lhs = l_operator(&Jacobian::of(&u.add(b)), &Jacobian::of(&u.sub(b)));
    let rhs = l_operator(&Jacobian::of(u), &Jacobian::of(b));
    lhs.axpy(2.0, &rhs).max_abs()
}

/// Vorticity system: `(α, β)` are rebuilt by Biot-Savart, then
/// `∂ₜX = -div(βX) + L(∇α,∇β) - ½curl(R𝔠(α+β))`, likewise for `Y` with the
/// roles swapped, and the means follow `-½⟨R𝔠(α+β)⟩`.
pub fn rhs_vorticity(v: &VorticityState, c: &CouplingMatrix) -> Result<VorticityState> {
    let grid = v.grid();
    let e = v.to_elsasser()?;
    let r = v.r.samples();
    let (a1, a2) = e.alpha.samples();
    let (b1, b2) = e.beta.samples();
    let (xs, ys) = grid.inverse_pair(v.x.coeffs(), v.y.coeffs());
    let ja = Jacobian::of(&e.alpha).samples();
    let jb = Jacobian::of(&e.beta).samples();

    let h1 = zip_map(&a1, &b1, |a, b| 0.5 * (a + b));
    let h2 = zip_map(&a2, &b2, |a, b| 0.5 * (a + b));
    let (fr1, fr2) = forward2(
        grid,
        &zip_map(&r, &h1, |a, b| a * b),
        &zip_map(&r, &h2, |a, b| a * b),
    );
    let (bx1, bx2) = forward2(
        grid,
        &zip_map(&b1, &xs, |a, b| a * b),
        &zip_map(&b2, &xs, |a, b| a * b),
    );
    let (ay1, ay2) = forward2(
        grid,
        &zip_map(&a1, &ys, |a, b| a * b),
        &zip_map(&a2, &ys, |a, b| a * b),
    );
    let (lab, lba) = forward2(grid, &l_samples(&ja, &jb), &l_samples(&jb, &ja));
    let (g1, g2) = coupling_samples(&r, &h1, &h2, c);
    let (g1, g2) = forward2(grid, &g1, &g2);

    let curl_g = dx(&g2).sub(&dy(&g1));
    let mut dxt = div2(&bx1, &bx2).scaled(-1.0).add(&lab).sub(&curl_g);
    let mut dyt = div2(&ay1, &ay2).scaled(-1.0).add(&lba).sub(&curl_g);
    // both are curls; drop the rounding residue in the mean mode
    remove_mean(&mut dxt);
    remove_mean(&mut dyt);
    let dmean = [-g1.mean(), -g2.mean()];
    Ok(VorticityState {
        time: v.time,
        r: div2(&fr1, &fr2).scaled(-1.0),
        x: dxt,
        y: dyt,
        mean_alpha: dmean,
        mean_beta: dmean,
    })
}

/// Incompressible Euler, `∂ₜu = -P div(u⊗u)`.
pub fn rhs_euler(s: &EulerState) -> EulerState {
    let grid = s.u.grid();
    let (u1, u2) = s.u.samples();
    let (t11, t12) = forward2(
        grid,
        &zip_map(&u1, &u1, |a, b| a * b),
        &zip_map(&u1, &u2, |a, b| a * b),
    );
    let t22 = SpectralField::from_samples_dealiased(grid, &zip_map(&u2, &u2, |a, b| a * b));
    let force = VectorField::new(div2(&t11, &t12), div2(&t12, &t22));
    EulerState {
        time: s.time,
        u: leray_project(&force).scaled(-1.0),
    }
}

/// Pressure of the Elsässer equation for `α`, `-Δπ = div(div(β⊗α) + ½R𝔠(α+β))`,
/// with zero mean, and `Π = π - |b|²/2`.
pub fn mhd_pressure(s: &MhdState, c: &CouplingMatrix) -> PressureFields {
    let grid = s.grid();
    let e = s.to_elsasser();
    let t = elsasser_terms(&e.r, &e.alpha, &e.beta, c);
    let [[m11, m12], [m21, m22]] = &t.m;
    let f1 = div2(m11, m12).add(&t.g.0);
    let f2 = div2(m21, m22).add(&t.g.1);
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            if idx == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let (k1, k2) = grid.wavevector(idx);
            let kf = f1.coeffs()[idx] * k1 + f2.coeffs()[idx] * k2;
            Complex64::new(0.0, 1.0) * kf / (k1 * k1 + k2 * k2)
        })
        .collect();
    let pi = SpectralField::from_coeffs(grid, coeffs);
    let (bx, by) = s.b.samples();
    let big_pi: Vec<f64> = pi
        .samples()
        .iter()
        .enumerate()
        .map(|(i, p)| p - 0.5 * (bx[i] * bx[i] + by[i] * by[i]))
        .collect();
    PressureFields {
        big_pi: SpectralField::from_samples(grid, &big_pi),
        pi,
    }
}
