//! Littlewood-Paley analysis on the discrete torus.
//!
//! The profile `χ` is a smooth radial function equal to one on `|ξ| ≤ 1.1`
//! and vanishing for `|ξ| ≥ 1.9`. Shell `j ≥ 0` is `φ(2⁻ʲξ)` with
//! `φ(ξ) = χ(ξ) - χ(2ξ)`, supported in `2ʲ⁻¹ ≤ |ξ| ≤ 2ʲ⁺¹`, and the low
//! block `-1` is `χ(2ξ)`, so that the blocks telescope:
//! `Sⱼ = Σ_{k ≤ j-1} Δₖ = χ(2¹⁻ʲD)`. A single mode `|k| = 2ʲ` lies entirely
//! in shell `j`.
//!
//! The top shell `J = log₂(n/2)` is taken as `1 - S_J`. It agrees with
//! `φ(2⁻ᴶ·)` on every mode with `|k| ≤ 1.1 · n/2` and also picks up the
//! lattice corners, so the blocks sum to the identity on every mode.

mod paraproduct;
pub(crate) mod probes;

pub use paraproduct::{paraproduct, remainder};
pub use probes::{bernstein_ratio, transport_commutator_block, BernsteinRatio};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::field::{l2_norm_samples, max_abs};
use crate::grid::{FourierGrid, SpectralField};

const CHI_INNER: f64 = 1.1;
const CHI_OUTER: f64 = 1.9;

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Radial low-pass profile `χ(r)`.
pub fn chi(r: f64) -> f64 {
    if r <= CHI_INNER {
        1.0
    } else if r >= CHI_OUTER {
        0.0
    } else {
        let t = (r - CHI_INNER) / (CHI_OUTER - CHI_INNER);
        let a = bump(1.0 - t);
        a / (a + bump(t))
    }
}

/// Integrability index of a Besov norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrability {
    L2,
    LInf,
}

/// Summation index of a Besov norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Summation {
    One,
    Two,
    Inf,
}

/// Indices `(s, p, r)` of the non-homogeneous space `B^s_{p,r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub p: Integrability,
    pub r: Summation,
}

impl BesovSpec {
    pub fn new(s: f64, p: Integrability, r: Summation) -> Self {
        Self { s, p, r }
    }

    /// Builds a spec from numeric indices; `f64::INFINITY` means `∞`.
    pub fn from_indices(s: f64, p: f64, r: f64) -> Result<Self> {
        let p = if p == 2.0 {
            Integrability::L2
        } else if p.is_infinite() && p > 0.0 {
            Integrability::LInf
        } else {
            return Err(Error::UnsupportedIntegrability(p));
        };
        let r = if r == 1.0 {
            Summation::One
        } else if r == 2.0 {
            Summation::Two
        } else if r.is_infinite() && r > 0.0 {
            Summation::Inf
        } else {
            return Err(Error::UnsupportedSummation(r));
        };
        Ok(Self { s, p, r })
    }

    /// `B^s_{∞,1}`.
    pub fn linf_one(s: f64) -> Self {
        Self::new(s, Integrability::LInf, Summation::One)
    }

    /// Whether the space embeds in `W^{1,∞}` (`s > 1`, or `s = r = 1`).
    pub fn is_lipschitz(&self) -> bool {
        self.p == Integrability::LInf
            && (self.s > 1.0 || (self.s == 1.0 && self.r == Summation::One))
    }
}

/// Dyadic multipliers evaluated on the lattice of one grid.
#[derive(Debug, Clone)]
pub struct LPFilterBank {
    grid: Arc<FourierGrid>,
    max_shell: i32,
    /// `symbols[j + 1]` is the multiplier of block `j`, `j = -1..=J`.
    symbols: Vec<Vec<f64>>,
}

impl LPFilterBank {
    pub fn new(grid: &Arc<FourierGrid>) -> Self {
        let max_shell = (grid.n() / 2).trailing_zeros() as i32;
        let norms: Vec<f64> = (0..grid.len())
            .map(|idx| grid.wavevector_norm(idx))
            .collect();
        // χ(2⁻ʲ·) on every mode
        let profile =
            |j: i32| -> Vec<f64> { norms.iter().map(|&r| chi(r * 2f64.powi(-j))).collect() };
        let mut symbols = Vec::with_capacity(max_shell as usize + 2);
        symbols.push(profile(-1));
        for j in 0..max_shell {
            let outer = profile(j);
            let inner = profile(j - 1);
            symbols.push(outer.iter().zip(&inner).map(|(a, b)| a - b).collect());
        }
        let top_inner = profile(max_shell - 1);
        symbols.push(top_inner.iter().map(|b| 1.0 - b).collect());
        Self {
            grid: Arc::clone(grid),
            max_shell,
            symbols,
        }
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        &self.grid
    }

    /// Highest shell index `J = log₂(n/2)`.
    pub fn max_shell(&self) -> i32 {
        self.max_shell
    }

    /// Shell indices `-1..=J`.
    pub fn shells(&self) -> impl Iterator<Item = i32> {
        -1..=self.max_shell
    }

    /// Multiplier of block `j` on every mode.
    pub fn symbol(&self, j: i32) -> Result<&[f64]> {
        self.check_shell(j)?;
        Ok(&self.symbols[(j + 1) as usize])
    }

    /// Symbol of `Sⱼ`, `χ(2¹⁻ʲ·)`, evaluated directly on every mode.
    pub fn lowpass_symbol(&self, j: i32) -> Vec<f64> {
        (0..self.grid.len())
            .map(|idx| chi(self.grid.wavevector_norm(idx) * 2f64.powi(1 - j)))
            .collect()
    }

    fn check_shell(&self, j: i32) -> Result<()> {
        if j < -1 || j > self.max_shell {
            return Err(Error::ShellOutOfRange {
                index: j,
                max: self.max_shell,
            });
        }
        Ok(())
    }

    /// `Δⱼf`.
    pub fn block(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        let sym = self.symbol(j)?;
        Ok(f.map_modes(|idx| Complex64::new(sym[idx], 0.0)))
    }

    /// All blocks `Δ₋₁f, …, Δ_J f`.
    pub fn blocks(&self, f: &SpectralField) -> Vec<SpectralField> {
        self.symbols
            .iter()
            .map(|sym| f.map_modes(|idx| Complex64::new(sym[idx], 0.0)))
            .collect()
    }

    /// Real-space samples of every block.
    pub(crate) fn block_samples(&self, f: &SpectralField) -> Vec<Vec<f64>> {
        let blocks = self.blocks(f);
        let mut out = Vec::with_capacity(blocks.len());
        for pair in blocks.chunks(2) {
            if pair.len() == 2 {
                let (a, b) = self.grid.inverse_pair(pair[0].coeffs(), pair[1].coeffs());
                out.push(a);
                out.push(b);
            } else {
                out.push(pair[0].samples());
            }
        }
        out
    }

    /// Low-frequency cut-off `Sⱼf = Σ_{k ≤ j-1} Δₖf`, for `j ≥ 0`.
    pub fn lowpass(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        if j < 0 {
            return Err(Error::NegativeLowPass(j));
        }
        if j > self.max_shell {
            return Ok(f.clone());
        }
        let mut sum = vec![0.0; self.grid.len()];
        for k in -1..j {
            for (acc, s) in sum.iter_mut().zip(self.symbol(k)?) {
                *acc += s;
            }
        }
        Ok(f.map_modes(|idx| Complex64::new(sum[idx], 0.0)))
    }

    /// Discrete `ℓ¹` mass of the convolution kernel of block `j`, i.e. the
    /// operator norm of `Δⱼ` on grid samples in the max norm.
    pub fn symbol_mass(&self, j: i32) -> Result<f64> {
        let sym = self.symbol(j)?;
        let coeffs: Vec<Complex64> = sym.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        // kernel samples κ(l) = n⁻² Σ_k φ(k) e^{ik·x_l}
        let kernel = self.grid.inverse(&coeffs);
        let scale = 1.0 / self.grid.len() as f64;
        Ok(kernel.iter().map(|v| v.abs() * scale).sum())
    }

    /// Largest block kernel mass over all shells.
    pub fn max_symbol_mass(&self) -> f64 {
        self.shells()
            .map(|j| self.symbol_mass(j).unwrap_or(0.0))
            .fold(0.0, f64::max)
    }

    /// Per-shell `Lᵖ` norms `‖Δⱼf‖`, for `j = -1..=J`.
    pub fn shell_norms(&self, f: &SpectralField, p: Integrability) -> Vec<f64> {
        let area = self.grid.cell_area();
        self.block_samples(f)
            .iter()
            .map(|s| match p {
                Integrability::LInf => max_abs(s),
                Integrability::L2 => l2_norm_samples(s, area),
            })
            .collect()
    }

    /// `‖f‖_{B^s_{p,r}}`: the `ℓʳ` norm over `j` of `2^{js}‖Δⱼf‖_{Lᵖ}`.
    pub fn besov_norm(&self, f: &SpectralField, spec: BesovSpec) -> f64 {
        let weighted = self
            .shell_norms(f, spec.p)
            .into_iter()
            .zip(self.shells())
            .map(|(norm, j)| 2f64.powf(j as f64 * spec.s) * norm);
        match spec.r {
            Summation::One => weighted.sum(),
            Summation::Two => weighted.map(|w| w * w).sum::<f64>().sqrt(),
            Summation::Inf => weighted.fold(0.0, f64::max),
        }
    }
}

/// `‖f‖_{B^s_{p,r}}` with numeric indices; `p` must be 2 or `∞`.
pub fn besov_norm(f: &SpectralField, s: f64, p: f64, r: f64, bank: &LPFilterBank) -> Result<f64> {
    Ok(bank.besov_norm(f, BesovSpec::from_indices(s, p, r)?))
}
