use std::sync::Arc;

use num_complex::Complex64;

use super::FourierGrid;

/// Coordinate axis of the 2-D torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Scalar field on the periodic grid, stored as Fourier coefficients.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<FourierGrid>,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn constant(grid: &Arc<FourierGrid>, value: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(value, 0.0);
        f
    }

    pub fn from_coeffs(grid: &Arc<FourierGrid>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(
            coeffs.len(),
            grid.len(),
            "coefficient count does not match grid"
        );
        Self {
            grid: Arc::clone(grid),
            coeffs,
        }
    }

    /// Transform real samples without masking.
    pub fn from_samples(grid: &Arc<FourierGrid>, samples: &[f64]) -> Self {
        Self::from_coeffs(grid, grid.forward(samples))
    }

    /// Transform real samples and zero the masked modes, which is how every
    /// nonlinear product re-enters spectral space.
    pub fn from_samples_dealiased(grid: &Arc<FourierGrid>, samples: &[f64]) -> Self {
        let mut coeffs = grid.forward(samples);
        grid.apply_mask(&mut coeffs);
        Self::from_coeffs(grid, coeffs)
    }

    /// Samples `f(x, y)` at the grid points.
    pub fn from_fn(grid: &Arc<FourierGrid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut samples = Vec::with_capacity(grid.len());
        for i in 0..n {
            let x = grid.coordinate(i);
            for j in 0..n {
                samples.push(f(x, grid.coordinate(j)));
            }
        }
        Self::from_samples(grid, &samples)
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Real-space samples.
    pub fn samples(&self) -> Vec<f64> {
        self.grid.inverse(&self.coeffs)
    }

    /// Spatial mean (the `k = 0` coefficient).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    fn check_grid(&self, other: &Self) {
        assert!(
            self.grid.n() == other.grid.n(),
            "fields live on different grids ({} vs {})",
            self.grid.n(),
            other.grid.n()
        );
    }

    /// Applies a real multiplier per mode index.
    pub fn map_modes(&self, mut symbol: impl FnMut(usize) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| c * symbol(idx))
            .collect();
        Self::from_coeffs(&self.grid, coeffs)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::from_coeffs(&self.grid, self.coeffs.iter().map(|&c| c * a).collect())
    }

    /// `self + a · other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        self.check_grid(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| x + y * a)
            .collect();
        Self::from_coeffs(&self.grid, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn add_assign_scaled(&mut self, a: f64, other: &Self) {
        self.check_grid(other);
        for (x, &y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * a;
        }
    }

    pub fn dealiased(&self) -> Self {
        let mut f = self.clone();
        self.grid.apply_mask(&mut f.coeffs);
        f
    }

    /// Largest coefficient magnitude on masked modes.
    pub fn masked_content(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(idx, _)| !self.grid.is_retained(*idx))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max_k |c(-k) - conj(c(k))|`; zero for fields representing real functions.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|idx| {
                let partner = self.coeffs[self.grid.conjugate_index(idx)];
                (partner - self.coeffs[idx].conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Maximum absolute sample value.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.samples())
    }

    /// `L²` norm by grid quadrature.
    pub fn l2_norm(&self) -> f64 {
        l2_norm_samples(&self.samples(), self.grid.cell_area())
    }

    /// `∫ f g dx` by Parseval.
    pub fn inner(&self, other: &Self) -> f64 {
        self.check_grid(other);
        let area = (2.0 * std::f64::consts::PI).powi(2);
        area * self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum::<f64>()
    }

    /// Maximum of `|f - g|` over samples.
    pub fn max_difference(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn derivative(&self, axis: Axis) -> Self {
        super::derivative(self, axis)
    }

    /// Dealiased pointwise product.
    pub fn product(&self, other: &Self) -> Self {
        super::dealias_product(self, other)
    }
}

/// Pair of scalar fields `(v₁, v₂)`.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub x: SpectralField,
    pub y: SpectralField,
}

impl VectorField {
    pub fn new(x: SpectralField, y: SpectralField) -> Self {
        assert_eq!(x.grid().n(), y.grid().n(), "components on different grids");
        Self { x, y }
    }

    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        Self::new(SpectralField::zeros(grid), SpectralField::zeros(grid))
    }

    pub fn constant(grid: &Arc<FourierGrid>, value: [f64; 2]) -> Self {
        Self::new(
            SpectralField::constant(grid, value[0]),
            SpectralField::constant(grid, value[1]),
        )
    }

    pub fn from_fn(
        grid: &Arc<FourierGrid>,
        fx: impl Fn(f64, f64) -> f64,
        fy: impl Fn(f64, f64) -> f64,
    ) -> Self {
        Self::new(
            SpectralField::from_fn(grid, fx),
            SpectralField::from_fn(grid, fy),
        )
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        self.x.grid()
    }

    pub fn mean(&self) -> [f64; 2] {
        [self.x.mean(), self.y.mean()]
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::new(self.x.scaled(a), self.y.scaled(a))
    }

    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        Self::new(self.x.axpy(a, &other.x), self.y.axpy(a, &other.y))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn dealiased(&self) -> Self {
        Self::new(self.x.dealiased(), self.y.dealiased())
    }

    /// `L²` norm of `|v|`.
    pub fn l2_norm(&self) -> f64 {
        (self.x.l2_norm().powi(2) + self.y.l2_norm().powi(2)).sqrt()
    }

    /// Maximum over samples of the Euclidean length `|v|`.
    pub fn max_abs(&self) -> f64 {
        let (sx, sy) = self.grid().inverse_pair(self.x.coeffs(), self.y.coeffs());
        sx.iter()
            .zip(&sy)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    /// Maximum over samples of `|v - w|`.
    pub fn max_difference(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// Largest `|k·v̂(k)|` over all modes.
    pub fn max_divergence_mode(&self) -> f64 {
        let grid = self.grid();
        (0..grid.len())
            .map(|idx| {
                let (k1, k2) = grid.wavevector(idx);
                (self.x.coeffs()[idx] * k1 + self.y.coeffs()[idx] * k2).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Whether `|k·v̂(k)| ≤ tol · max|v̂|` on every mode.
    pub fn is_divergence_free(&self, tol: f64) -> bool {
        let scale = self.x.max_coeff().max(self.y.max_coeff());
        self.max_divergence_mode() <= tol * scale.max(f64::MIN_POSITIVE)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Real-space samples of both components.
    pub fn samples(&self) -> (Vec<f64>, Vec<f64>) {
        self.grid().inverse_pair(self.x.coeffs(), self.y.coeffs())
    }
}

pub(crate) fn max_abs(samples: &[f64]) -> f64 {
    samples.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

pub(crate) fn l2_norm_samples(samples: &[f64], cell_area: f64) -> f64 {
    (samples.iter().map(|v| v * v).sum::<f64>() * cell_area).sqrt()
}
