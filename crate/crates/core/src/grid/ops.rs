use num_complex::Complex64;

use super::{Axis, SpectralField, VectorField};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Transform to real space and back; used as a transform self-test.
pub fn fft_roundtrip(f: &SpectralField) -> SpectralField {
    SpectralField::from_samples(f.grid(), &f.samples())
}

/// Spectral derivative `∂_axis f`. The Nyquist wavenumber of the
/// differentiated axis is dropped so real fields stay real.
pub fn derivative(f: &SpectralField, axis: Axis) -> SpectralField {
    let grid = f.grid().clone();
    let n = grid.n();
    let nyq = grid.nyquist_index();
    f.map_modes(|idx| {
        let (i, j) = (idx / n, idx % n);
        let (pos, k) = match axis {
            Axis::X => (i, grid.wavenumber(i)),
            Axis::Y => (j, grid.wavenumber(j)),
        };
        if pos == nyq {
            ZERO
        } else {
            I * k
        }
    })
}

pub fn gradient(f: &SpectralField) -> VectorField {
    VectorField::new(derivative(f, Axis::X), derivative(f, Axis::Y))
}

/// `∇⊥ψ = (-∂₂ψ, ∂₁ψ)`.
pub fn perp_gradient(psi: &SpectralField) -> VectorField {
    VectorField::new(
        derivative(psi, Axis::Y).scaled(-1.0),
        derivative(psi, Axis::X),
    )
}

pub fn divergence(v: &VectorField) -> SpectralField {
    derivative(&v.x, Axis::X).add(&derivative(&v.y, Axis::Y))
}

/// Scalar curl `∂₁v₂ - ∂₂v₁`.
pub fn curl2d(v: &VectorField) -> SpectralField {
    derivative(&v.y, Axis::X).sub(&derivative(&v.x, Axis::Y))
}

/// Mean-free solution of `Δψ = f`; the mean mode of `f` is ignored.
pub fn poisson_solve(f: &SpectralField) -> SpectralField {
    let grid = f.grid().clone();
    f.map_modes(|idx| {
        let (k1, k2) = grid.wavevector(idx);
        let k2sum = k1 * k1 + k2 * k2;
        if idx == 0 {
            ZERO
        } else {
            Complex64::new(-1.0 / k2sum, 0.0)
        }
    })
}

/// Divergence-free field with curl `omega` and spatial mean `mean`,
/// `v = ∇⊥ψ + mean` with `Δψ = omega`.
pub fn biot_savart(omega: &SpectralField, mean: [f64; 2]) -> Result<VectorField> {
    let m = omega.coeffs()[0].norm();
    let scale = omega.max_coeff().max(1.0);
    if m > 1e-12 * scale {
        return Err(Error::CurlNotMeanFree(m));
    }
    let mut v = perp_gradient(&poisson_solve(omega));
    v.x.coeffs_mut()[0] = Complex64::new(mean[0], 0.0);
    v.y.coeffs_mut()[0] = Complex64::new(mean[1], 0.0);
    Ok(v)
}

/// Leray projector `Id - k kᵀ/|k|²` on every mode `k ≠ 0`; the mean mode is
/// left untouched. Nyquist components of `k` are dropped as in
/// [`derivative`], so the result is exactly divergence-free.
pub fn leray_project(v: &VectorField) -> VectorField {
    let grid = v.grid().clone();
    let len = grid.len();
    let mut px = Vec::with_capacity(len);
    let mut py = Vec::with_capacity(len);
    let (cx, cy) = (v.x.coeffs(), v.y.coeffs());
    let n = grid.n();
    let nyq = grid.nyquist_index();
    for idx in 0..len {
        // the wavevector `derivative` sees, so that div P v = 0 on every mode
        let (k1, k2) = grid.wavevector(idx);
        let k1 = if idx / n == nyq { 0.0 } else { k1 };
        let k2 = if idx % n == nyq { 0.0 } else { k2 };
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == 0.0 {
            px.push(cx[idx]);
            py.push(cy[idx]);
            continue;
        }
        let kdotv = (cx[idx] * k1 + cy[idx] * k2) / k2sum;
        px.push(cx[idx] - kdotv * k1);
        py.push(cy[idx] - kdotv * k2);
    }
    VectorField::new(
        SpectralField::from_coeffs(&grid, px),
        SpectralField::from_coeffs(&grid, py),
    )
}

/// Pointwise product in real space followed by the 2/3-rule mask.
pub fn dealias_product(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let grid = f.grid().clone();
    let (sf, sg) = grid.inverse_pair(f.coeffs(), g.coeffs());
    let prod: Vec<f64> = sf.iter().zip(&sg).map(|(a, b)| a * b).collect();
    SpectralField::from_samples_dealiased(&grid, &prod)
}
