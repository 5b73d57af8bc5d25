//! Periodic Fourier grid on the torus `[0, 2π)²`.
//!
//! Real-space samples and Fourier coefficients share one layout: a flat
//! row-major `n × n` array where the first index runs along `x` and the
//! second (fastest) along `y`. Coefficients are normalised as Fourier series
//! amplitudes, `f(x) = Σ_k c_k e^{i k·x}`, with wavenumbers in FFT order
//! `0, 1, …, n/2 - 1, -n/2, …, -1` on each axis.

pub(crate) mod field;
mod ops;

pub use field::{Axis, SpectralField, VectorField};
pub use ops::{
    biot_savart, curl2d, dealias_product, derivative, divergence, fft_roundtrip, gradient,
    leray_project, perp_gradient, poisson_solve,
};

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Square periodic grid of side `2π` with `n` points per axis.
pub struct FourierGrid {
    n: usize,
    wavenumbers: Vec<f64>,
    retained: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for FourierGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierGrid").field("n", &self.n).finish()
    }
}

impl PartialEq for FourierGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl FourierGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGridSize(n));
        }
        let wavenumbers: Vec<f64> = (0..n).map(|i| signed_wavenumber(i, n) as f64).collect();
        let cutoff = n as f64 / 3.0;
        let mut retained = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                let kmax = wavenumbers[i].abs().max(wavenumbers[j].abs());
                retained[i * n + j] = kmax <= cutoff;
            }
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            n,
            wavenumbers,
            retained,
            forward,
            inverse,
        })
    }

    /// Convenience constructor returning the grid behind an `Arc`, which is
    /// how fields hold on to it.
    pub fn shared(n: usize) -> Result<Arc<Self>> {
        Self::new(n).map(Arc::new)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of lattice modes (equivalently grid points), `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2π / n`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Quadrature weight of one cell, `(2π / n)²`.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Coordinate of sample index `i` along either axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        self.spacing() * i as f64
    }

    /// Signed wavenumber of FFT index `i` along one axis.
    pub fn wavenumber(&self, i: usize) -> f64 {
        self.wavenumbers[i]
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Wavevector `(k₁, k₂)` of flat mode index `idx`.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> (f64, f64) {
        (
            self.wavenumbers[idx / self.n],
            self.wavenumbers[idx % self.n],
        )
    }

    /// `|k|` of flat mode index `idx`.
    pub fn wavevector_norm(&self, idx: usize) -> f64 {
        let (k1, k2) = self.wavevector(idx);
        k1.hypot(k2)
    }

    /// Index of the Nyquist wavenumber `-n/2` along one axis.
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Flat index of the mode `-k` given the flat index of `k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n;
        let (i, j) = (idx / n, idx % n);
        ((n - i) % n) * n + (n - j) % n
    }

    /// 2/3-rule mask: `false` exactly when `max(|k₁|, |k₂|) > n/3`.
    pub fn dealias_mask(&self) -> &[bool] {
        &self.retained
    }

    #[inline]
    pub fn is_retained(&self, idx: usize) -> bool {
        self.retained[idx]
    }

    /// Zero every masked coefficient in place.
    pub fn apply_mask(&self, coeffs: &mut [Complex64]) {
        for (c, &keep) in coeffs.iter_mut().zip(&self.retained) {
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Forward transform of real samples into normalised Fourier coefficients.
    pub fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        assert_eq!(
            samples.len(),
            self.len(),
            "sample count does not match grid"
        );
        let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        self.transform(&mut buf, &self.forward);
        let scale = 1.0 / self.len() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Forward transform of two real arrays at the price of one complex FFT.
    pub fn forward_pair(&self, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        assert_eq!(a.len(), self.len());
        assert_eq!(b.len(), self.len());
        let mut buf: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| Complex64::new(x, y))
            .collect();
        self.transform(&mut buf, &self.forward);
        let scale = 0.5 / self.len() as f64;
        let mut fa = vec![Complex64::new(0.0, 0.0); self.len()];
        let mut fb = vec![Complex64::new(0.0, 0.0); self.len()];
        for idx in 0..self.len() {
            let z = buf[idx];
            let zc = buf[self.conjugate_index(idx)].conj();
            fa[idx] = (z + zc) * scale;
            // (z - zc) / (2i) = -i (z - zc) / 2
            let d = z - zc;
            fb[idx] = Complex64::new(d.im, -d.re) * scale;
        }
        (fa, fb)
    }

    /// Inverse transform; the imaginary part is discarded, so the input is
    /// assumed Hermitian.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        assert_eq!(
            coeffs.len(),
            self.len(),
            "coefficient count does not match grid"
        );
        let mut buf = coeffs.to_vec();
        self.transform(&mut buf, &self.inverse);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// Inverse transform of two Hermitian spectra with one complex FFT.
    pub fn inverse_pair(&self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(a.len(), self.len());
        assert_eq!(b.len(), self.len());
        let mut buf: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| x + Complex64::new(-y.im, y.re))
            .collect();
        self.transform(&mut buf, &self.inverse);
        buf.into_iter().map(|c| (c.re, c.im)).unzip()
    }

    fn transform(&self, buf: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        // rows (y direction), then columns via transposition
        plan.process_with_scratch(buf, &mut scratch);
        transpose_square(buf, n);
        plan.process_with_scratch(buf, &mut scratch);
        transpose_square(buf, n);
    }
}

fn signed_wavenumber(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        for n in [0, 4, 12, 100] {
            assert!(matches!(
                FourierGrid::new(n),
                Err(Error::InvalidGridSize(_))
            ));
        }
        assert!(FourierGrid::new(8).is_ok());
    }

    #[test]
    fn mask_matches_two_thirds_rule() {
        let g = FourierGrid::new(64).unwrap();
        for idx in 0..g.len() {
            let (k1, k2) = g.wavevector(idx);
            let expected = k1.abs().max(k2.abs()) <= 64.0 / 3.0;
            assert_eq!(g.is_retained(idx), expected);
        }
        // 21 retained per side plus zero: 21*2+1
        let kept = g.dealias_mask().iter().filter(|&&b| b).count();
        assert_eq!(kept, 43 * 43);
    }

    #[test]
    fn wavenumbers_in_fft_order() {
        let g = FourierGrid::new(8).unwrap();
        assert_eq!(
            g.wavenumbers(),
            &[0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]
        );
        assert_eq!(g.conjugate_index(0), 0);
        assert_eq!(g.conjugate_index(1), 7);
        assert_eq!(g.conjugate_index(8 + 1), 7 * 8 + 7);
    }

    #[test]
    fn pair_transforms_match_single() {
        let g = FourierGrid::new(16).unwrap();
        let a: Vec<f64> = (0..g.len()).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
        let b: Vec<f64> = (0..g.len()).map(|i| ((i * 5) % 11) as f64 * 0.3).collect();
        let (fa, fb) = g.forward_pair(&a, &b);
        let fa1 = g.forward(&a);
        let fb1 = g.forward(&b);
        for i in 0..g.len() {
            assert!((fa[i] - fa1[i]).norm() < 1e-13);
            assert!((fb[i] - fb1[i]).norm() < 1e-13);
        }
        let (ra, rb) = g.inverse_pair(&fa, &fb);
        for i in 0..g.len() {
            assert!((ra[i] - a[i]).abs() < 1e-12);
            assert!((rb[i] - b[i]).abs() < 1e-12);
        }
    }
}
