//! Named initial conditions. All fields are band-limited well inside the
//! dealiasing mask for `n ≥ 16`, except `random-band` whose band is a parameter.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::MhdState;
use crate::grid::{perp_gradient, FourierGrid, SpectralField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    OrszagTang,
    TaylorGreen,
    SmallB,
    RandomBand,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::OrszagTang,
        Preset::TaylorGreen,
        Preset::SmallB,
        Preset::RandomBand,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::OrszagTang => "orszag-tang",
            Preset::TaylorGreen => "taylor-green",
            Preset::SmallB => "small-b",
            Preset::RandomBand => "random-band",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset `{s}`"))
    }
}

/// Parameters shared by the presets; each preset reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PresetParams {
    /// Velocity amplitude `A`.
    pub amplitude: f64,
    /// Size `ε` of `(R₀, b₀)` in `small-b`, and of `b₀` in `random-band`.
    pub epsilon: f64,
    /// Amplitude of `R₀`.
    pub r_amplitude: f64,
    /// Seed of `random-band`.
    pub seed: u64,
    /// Largest `|k|` of `random-band`.
    pub band: f64,
}

impl Default for PresetParams {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            epsilon: 1.0,
            r_amplitude: 1.0,
            seed: 0,
            band: 4.0,
        }
    }
}

/// Orszag-Tang velocity `A(-sin y, sin x)`.
fn ot_velocity(grid: &Arc<FourierGrid>, a: f64) -> VectorField {
    VectorField::from_fn(grid, |_, y| -a * y.sin(), |x, _| a * x.sin())
}

/// Orszag-Tang magnetic field `A(-sin y, sin 2x)`.
fn ot_magnetic(grid: &Arc<FourierGrid>, a: f64) -> VectorField {
    VectorField::from_fn(grid, |_, y| -a * y.sin(), |x, _| a * (2.0 * x).sin())
}

fn density(grid: &Arc<FourierGrid>, a: f64) -> SpectralField {
    SpectralField::from_fn(grid, |x, y| a * x.cos() * y.cos())
}

/// Taylor-Green velocity `A(-cos x sin y, sin x cos y)`.
pub fn taylor_green_velocity(grid: &Arc<FourierGrid>, a: f64) -> VectorField {
    VectorField::from_fn(
        grid,
        |x, y| -a * x.cos() * y.sin(),
        |x, y| a * x.sin() * y.cos(),
    )
}

/// Mean-free divergence-free field `∇⊥ψ` where `ψ` has random phases on
/// `1 ≤ |k| ≤ band` with amplitudes `|k|⁻³`, rescaled to `max |v| = 1`.
pub fn random_solenoidal(grid: &Arc<FourierGrid>, band: f64, rng: &mut impl Rng) -> VectorField {
    let psi = random_band_scalar(grid, band, 3.0, rng);
    let v = perp_gradient(&psi);
    let m = v.max_abs();
    if m > 0.0 {
        v.scaled(1.0 / m)
    } else {
        v
    }
}

/// Real mean-free scalar with random phases on `1 ≤ |k| ≤ band`, amplitudes
/// `|k|^{-decay}`, rescaled to `max |f| = 1`.
pub fn random_band_scalar(
    grid: &Arc<FourierGrid>,
    band: f64,
    decay: f64,
    rng: &mut impl Rng,
) -> SpectralField {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for idx in 1..grid.len() {
        let conj = grid.conjugate_index(idx);
        if conj < idx {
            continue;
        }
        let k = grid.wavevector_norm(idx);
        if k > band || !grid.is_retained(idx) {
            continue;
        }
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let amp = rng.gen_range(0.5..1.0) * k.powf(-decay);
        let c = Complex64::from_polar(amp, phase);
        if conj == idx {
            coeffs[idx] = Complex64::new(c.re, 0.0);
        } else {
            coeffs[idx] = c;
            coeffs[conj] = c.conj();
        }
    }
    let f = SpectralField::from_coeffs(grid, coeffs);
    let m = f.max_abs();
    if m > 0.0 {
        f.scaled(1.0 / m)
    } else {
        f
    }
}

/// Build the initial state of a preset.
///
/// * `orszag-tang`: `u = A(-sin y, sin x)`, `b = A(-sin y, sin 2x)`,
///   `R = r_amplitude · cos x cos y`.
/// * `small-b`: Orszag-Tang velocity, with `b` and `R` multiplied by `ε`.
/// * `taylor-green`: `u = A(-cos x sin y, sin x cos y)`, `b = 0`,
///   `R = r_amplitude · cos x cos y`.
/// * `random-band`: seeded random fields on `|k| ≤ band`, `max|u| = A`,
///   `max|b| = εA`, `max|R| = r_amplitude`.
pub fn build(grid: &Arc<FourierGrid>, preset: Preset, p: &PresetParams) -> MhdState {
    let a = p.amplitude;
    let state = match preset {
        Preset::OrszagTang => MhdState::new(
            density(grid, p.r_amplitude),
            ot_velocity(grid, a),
            ot_magnetic(grid, a),
        ),
        Preset::SmallB => MhdState::new(
            density(grid, p.epsilon * p.r_amplitude),
            ot_velocity(grid, a),
            ot_magnetic(grid, p.epsilon * a),
        ),
        Preset::TaylorGreen => MhdState::new(
            density(grid, p.r_amplitude),
            taylor_green_velocity(grid, a),
            VectorField::zeros(grid),
        ),
        Preset::RandomBand => {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            let u = random_solenoidal(grid, p.band, &mut rng).scaled(a);
            let b = random_solenoidal(grid, p.band, &mut rng).scaled(p.epsilon * a);
            let r = random_band_scalar(grid, p.band, 2.0, &mut rng).scaled(p.r_amplitude);
            MhdState::new(r, u, b)
        }
    };
    MhdState {
        time: 0.0,
        r: state.r.dealiased(),
        u: state.u.dealiased(),
        b: state.b.dealiased(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("vortex".parse::<Preset>().is_err());
    }

    #[test]
    fn presets_are_solenoidal_and_real() {
        let g = FourierGrid::shared(32).unwrap();
        for preset in Preset::ALL {
            let s = build(&g, preset, &PresetParams::default());
            assert!(s.is_divergence_free(1e-12), "{preset}");
            assert!(s.u.x.hermitian_defect() < 1e-15 && s.b.y.hermitian_defect() < 1e-15);
            assert!(s.r.hermitian_defect() < 1e-15);
        }
    }

    #[test]
    fn small_b_scales_b_and_r() {
        let g = FourierGrid::shared(16).unwrap();
        let base = build(&g, Preset::OrszagTang, &PresetParams::default());
        let p = PresetParams {
            epsilon: 0.25,
            ..Default::default()
        };
        let s = build(&g, Preset::SmallB, &p);
        assert!(s.u.max_difference(&base.u) < 1e-15);
        assert!(s.b.max_difference(&base.b.scaled(0.25)) < 1e-15);
        assert!(s.r.max_difference(&base.r.scaled(0.25)) < 1e-15);
    }

    #[test]
    fn random_band_is_seeded() {
        let g = FourierGrid::shared(32).unwrap();
        let p = PresetParams {
            seed: 11,
            epsilon: 0.5,
            ..Default::default()
        };
        let a = build(&g, Preset::RandomBand, &p);
        let b = build(&g, Preset::RandomBand, &p);
        assert_eq!(a.u.x.coeffs(), b.u.x.coeffs());
        assert!((a.u.max_abs() - 1.0).abs() < 1e-12);
        assert!((a.b.max_abs() - 0.5).abs() < 1e-12);
        let c = build(&g, Preset::RandomBand, &PresetParams { seed: 12, ..p });
        assert!(c.u.max_difference(&a.u) > 0.1);
    }
}
