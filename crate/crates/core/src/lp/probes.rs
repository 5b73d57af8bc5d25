//! Empirical probes of frequency-localized inequalities. They report
//! measured ratios; nothing here asserts a constant.

use super::LPFilterBank;
use crate::error::{Error, Result};
use crate::grid::field::max_abs;
use crate::grid::{dealias_product, gradient, SpectralField, VectorField};

/// Measured Bernstein ratios on one shell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinRatio {
    /// `‖∇Δⱼf‖_∞ / (2ʲ‖Δⱼf‖_∞)`, bounded above for every shell.
    pub upper: f64,
    /// `2ʲ‖Δⱼf‖_∞ / ‖∇Δⱼf‖_∞`, bounded above on annuli (`j ≥ 0`); infinite
    /// when the block has no gradient.
    pub lower: f64,
}

/// Bernstein ratios of block `j` of `f`.
pub fn bernstein_ratio(bank: &LPFilterBank, f: &SpectralField, j: i32) -> Result<BernsteinRatio> {
    let g = bank.block(f, j)?;
    let scale = f.max_coeff().max(f64::MIN_POSITIVE);
    if g.max_coeff() <= 1e-13 * scale {
        return Err(Error::EmptyShell(j));
    }
    let g_inf = max_abs(&g.samples());
    let grad_inf = gradient(&g).max_abs();
    let dyadic = 2f64.powi(j);
    let upper = grad_inf / (dyadic * g_inf);
    let lower = if grad_inf > 0.0 {
        dyadic * g_inf / grad_inf
    } else {
        f64::INFINITY
    };
    Ok(BernsteinRatio { upper, lower })
}

/// `v·∇g` with dealiased products.
pub(crate) fn advect(v: &VectorField, g: &SpectralField) -> SpectralField {
    let grad = gradient(g);
    dealias_product(&v.x, &grad.x).add(&dealias_product(&v.y, &grad.y))
}

/// Commutator `[v·∇, Δⱼ]f = v·∇(Δⱼf) - Δⱼ(v·∇f)`.
pub fn transport_commutator_block(
    bank: &LPFilterBank,
    v: &VectorField,
    f: &SpectralField,
    j: i32,
) -> Result<SpectralField> {
    let outer = advect(v, &bank.block(f, j)?);
    let inner = bank.block(&advect(v, f), j)?;
    Ok(outer.sub(&inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FourierGrid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup(n: usize) -> (Arc<FourierGrid>, LPFilterBank) {
        let g = FourierGrid::shared(n).unwrap();
        let bank = LPFilterBank::new(&g);
        (g, bank)
    }

    #[test]
    fn single_mode_ratio_is_one() {
        let (g, bank) = setup(64);
        for j in 0..=4 {
            let k = 2f64.powi(j);
            let f = SpectralField::from_fn(&g, |x, _| (k * x).cos());
            let r = bernstein_ratio(&bank, &f, j).unwrap();
            assert!((r.upper - 1.0).abs() < 1e-12, "j {j}: {r:?}");
            assert!((r.lower - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_mode_ratio() {
        let (g, bank) = setup(64);
        for j in 0..=4 {
            let k = 2f64.powi(j);
            let f = SpectralField::from_fn(&g, |x, y| (k * x).cos() + (k * y).cos());
            let r = bernstein_ratio(&bank, &f, j).unwrap();
            assert!((0.5..=2.0).contains(&r.upper) && (0.5..=2.0).contains(&r.lower));
        }
    }

    #[test]
    fn random_fields_stay_in_band() {
        let (g, bank) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..100 {
            let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = SpectralField::from_samples_dealiased(&g, &samples);
            for j in 0..bank.max_shell() {
                let r = bernstein_ratio(&bank, &f, j).unwrap();
                lo = lo.min(r.upper.min(r.lower));
                hi = hi.max(r.upper.max(r.lower));
            }
        }
        assert!(lo >= 0.25 && hi <= 4.0, "measured band [{lo}, {hi}]");
    }

    #[test]
    fn empty_shell_is_an_error() {
        let (g, bank) = setup(32);
        let f = SpectralField::from_fn(&g, |x, _| x.sin());
        assert!(matches!(
            bernstein_ratio(&bank, &f, 3),
            Err(Error::EmptyShell(3))
        ));
        let zero = SpectralField::zeros(&g);
        assert!(matches!(
            bernstein_ratio(&bank, &zero, 0),
            Err(Error::EmptyShell(0))
        ));
    }

    #[test]
    fn commutator_cases() {
        let (g, bank) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = SpectralField::from_samples_dealiased(&g, &samples);
        let v = VectorField::constant(&g, [0.7, -1.3]);
        for j in bank.shells() {
            let c = transport_commutator_block(&bank, &v, &f, j).unwrap();
            assert!(c.max_abs() < 1e-12);
        }
        let shear = VectorField::from_fn(&g, |_, y| y.sin(), |_, _| 0.0);
        let one = SpectralField::constant(&g, 1.0);
        assert!(
            transport_commutator_block(&bank, &shear, &one, 2)
                .unwrap()
                .max_abs()
                < 1e-14
        );

        // shear against cos(8x): Δ₃f = f, and v·∇f = -8 sin(my) sin(8x) has
        // modes (±8, ±m) where the shell-3 weight is w = φ(|(8, m)|/8)
        let f = SpectralField::from_fn(&g, |x, _| (8.0 * x).cos());
        for m in [1.0f64, 6.0] {
            let shear = VectorField::from_fn(&g, |_, y| (m * y).sin(), |_, _| 0.0);
            let c = transport_commutator_block(&bank, &shear, &f, 3).unwrap();
            let w = bank.symbol(3).unwrap()[8 * 64 + m as usize];
            let oracle = SpectralField::from_fn(&g, |x, y| {
                -8.0 * (m * y).sin() * (8.0 * x).sin() * (1.0 - w)
            });
            assert!(c.max_difference(&oracle) < 1e-12);
        }
    }
}
