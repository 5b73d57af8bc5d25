use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{biot_savart, curl2d, derivative, Axis, FourierGrid, SpectralField, VectorField};

/// Primitive unknowns `(R, u, b)`.
#[derive(Debug, Clone)]
pub struct MhdState {
    pub time: f64,
    pub r: SpectralField,
    pub u: VectorField,
    pub b: VectorField,
}

/// Elsässer unknowns `(R, α, β)` with `α = u + b`, `β = u - b`.
#[derive(Debug, Clone)]
pub struct ElsasserState {
    pub time: f64,
    pub r: SpectralField,
    pub alpha: VectorField,
    pub beta: VectorField,
}

/// Vorticity unknowns `(R, X, Y)` with `X = curl α`, `Y = curl β`, plus the
/// spatial means of `α` and `β` that the curls do not see.
#[derive(Debug, Clone)]
pub struct VorticityState {
    pub time: f64,
    pub r: SpectralField,
    pub x: SpectralField,
    pub y: SpectralField,
    pub mean_alpha: [f64; 2],
    pub mean_beta: [f64; 2],
}

/// Incompressible Euler velocity alone, used as an independent reference.
#[derive(Debug, Clone)]
pub struct EulerState {
    pub time: f64,
    pub u: VectorField,
}

/// MHD pressure `π` and hydrodynamic pressure `Π = π - |b|²/2`.
#[derive(Debug, Clone)]
pub struct PressureFields {
    pub pi: SpectralField,
    pub big_pi: SpectralField,
}

impl MhdState {
    pub fn new(r: SpectralField, u: VectorField, b: VectorField) -> Self {
        Self { time: 0.0, r, u, b }
    }

    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        Self::new(
            SpectralField::zeros(grid),
            VectorField::zeros(grid),
            VectorField::zeros(grid),
        )
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        self.r.grid()
    }

    pub fn to_elsasser(&self) -> ElsasserState {
        ElsasserState {
            time: self.time,
            r: self.r.clone(),
            alpha: self.u.add(&self.b),
            beta: self.u.sub(&self.b),
        }
    }

    pub fn to_vorticity(&self) -> VorticityState {
        self.to_elsasser().to_vorticity()
    }

    pub fn is_divergence_free(&self, tol: f64) -> bool {
        self.u.is_divergence_free(tol) && self.b.is_divergence_free(tol)
    }

    /// Largest pointwise distance in `(u, b)`.
    pub fn max_difference(&self, other: &Self) -> f64 {
        self.u
            .max_difference(&other.u)
            .max(self.b.max_difference(&other.b))
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            time: self.time,
            r: self.r.scaled(a),
            u: self.u.scaled(a),
            b: self.b.scaled(a),
        }
    }
}

impl ElsasserState {
    pub fn grid(&self) -> &Arc<FourierGrid> {
        self.r.grid()
    }

    pub fn to_primitive(&self) -> MhdState {
        MhdState {
            time: self.time,
            r: self.r.clone(),
            u: self.alpha.add(&self.beta).scaled(0.5),
            b: self.alpha.sub(&self.beta).scaled(0.5),
        }
    }

    pub fn to_vorticity(&self) -> VorticityState {
        VorticityState {
            time: self.time,
            r: self.r.clone(),
            x: curl2d(&self.alpha),
            y: curl2d(&self.beta),
            mean_alpha: self.alpha.mean(),
            mean_beta: self.beta.mean(),
        }
    }
}

impl VorticityState {
    pub fn grid(&self) -> &Arc<FourierGrid> {
        self.r.grid()
    }

    /// Reconstruct `(α, β)` by Biot-Savart.
    pub fn to_elsasser(&self) -> Result<ElsasserState> {
        Ok(ElsasserState {
            time: self.time,
            r: self.r.clone(),
            alpha: biot_savart(&self.x, self.mean_alpha)?,
            beta: biot_savart(&self.y, self.mean_beta)?,
        })
    }

    pub fn to_primitive(&self) -> Result<MhdState> {
        Ok(self.to_elsasser()?.to_primitive())
    }

    /// `‖α‖_{L²}` and `‖β‖_{L²}` from the curls and means by Parseval:
    /// `‖v‖² = (2π)² (|v̄|² + Σ_{k≠0} |ω̂(k)|²/|k|²)`.
    pub fn elsasser_l2_norms(&self) -> (f64, f64) {
        let grid = self.grid();
        let norm = |omega: &SpectralField, mean: [f64; 2]| {
            let area = (2.0 * std::f64::consts::PI).powi(2);
            let mut sum = mean[0] * mean[0] + mean[1] * mean[1];
            for (idx, c) in omega.coeffs().iter().enumerate().skip(1) {
                let (k1, k2) = grid.wavevector(idx);
                sum += c.norm_sqr() / (k1 * k1 + k2 * k2);
            }
            (area * sum).sqrt()
        };
        (
            norm(&self.x, self.mean_alpha),
            norm(&self.y, self.mean_beta),
        )
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            time: self.time,
            r: self.r.scaled(a),
            x: self.x.scaled(a),
            y: self.y.scaled(a),
            mean_alpha: [a * self.mean_alpha[0], a * self.mean_alpha[1]],
            mean_beta: [a * self.mean_beta[0], a * self.mean_beta[1]],
        }
    }
}

/// Velocity gradient `d[i][j] = ∂ⱼvᵢ`.
#[derive(Debug, Clone)]
pub struct Jacobian {
    pub d: [[SpectralField; 2]; 2],
}

impl Jacobian {
    pub fn of(v: &VectorField) -> Self {
        Self {
            d: [
                [derivative(&v.x, Axis::X), derivative(&v.x, Axis::Y)],
                [derivative(&v.y, Axis::X), derivative(&v.y, Axis::Y)],
            ],
        }
    }

    /// Real-space samples of the four entries, in the order `d11, d12, d21, d22`.
    pub fn samples(&self) -> [Vec<f64>; 4] {
        let grid = self.d[0][0].grid();
        let (a, b) = grid.inverse_pair(self.d[0][0].coeffs(), self.d[0][1].coeffs());
        let (c, d) = grid.inverse_pair(self.d[1][0].coeffs(), self.d[1][1].coeffs());
        [a, b, c, d]
    }

    /// `max_x |∇v(x)|` with the Frobenius norm at each point.
    pub fn linf_norm(&self) -> f64 {
        let [a, b, c, d] = self.samples();
        (0..a.len())
            .map(|i| (a[i] * a[i] + b[i] * b[i] + c[i] * c[i] + d[i] * d[i]).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Zero the mean mode in place.
pub(crate) fn remove_mean(f: &mut SpectralField) {
    f.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
}
