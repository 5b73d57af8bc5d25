//! Bony decomposition `uv = T_u v + T_v u + R(u, v)`.
//!
//! All three pieces are formed from real-space block samples, summed, and
//! transformed once with the dealiasing mask, so the identity holds to
//! rounding against [`dealias_product`](crate::grid::dealias_product).

use super::LPFilterBank;
use crate::grid::SpectralField;

/// Running sums `S_j = Σ_{k ≤ j-1} Δ_k` in real space, indexed by `j + 1`
/// for `j = -1..=J+1`.
fn lowpass_samples(blocks: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let len = blocks[0].len();
    let mut out = Vec::with_capacity(blocks.len() + 1);
    let mut acc = vec![0.0; len];
    out.push(acc.clone());
    for b in blocks {
        for (a, v) in acc.iter_mut().zip(b) {
            *a += v;
        }
        out.push(acc.clone());
    }
    out
}

/// Paraproduct `T_u v = Σ_j S_{j-1}u Δ_j v`. Only shells `j ≥ 1` contribute,
/// since `S_{-1}` and `S_{-2}` vanish.
pub fn paraproduct(u: &SpectralField, v: &SpectralField, bank: &LPFilterBank) -> SpectralField {
    let grid = bank.grid();
    let ub = bank.block_samples(u);
    let vb = bank.block_samples(v);
    let su = lowpass_samples(&ub);
    let mut acc = vec![0.0; grid.len()];
    // block index j sits at position j + 1; S_{j-1} sits at position j
    for (pos, vj) in vb.iter().enumerate().skip(2) {
        let s = &su[pos - 1];
        for ((a, x), y) in acc.iter_mut().zip(s).zip(vj) {
            *a += x * y;
        }
    }
    SpectralField::from_samples_dealiased(grid, &acc)
}

/// Remainder `R(u, v) = Σ_{|j - j'| ≤ 1} Δ_j u Δ_{j'} v`.
pub fn remainder(u: &SpectralField, v: &SpectralField, bank: &LPFilterBank) -> SpectralField {
    let grid = bank.grid();
    let ub = bank.block_samples(u);
    let vb = bank.block_samples(v);
    let count = ub.len();
    let mut acc = vec![0.0; grid.len()];
    for (p, up) in ub.iter().enumerate() {
        let lo = p.saturating_sub(1);
        let hi = (p + 1).min(count - 1);
        for vq in &vb[lo..=hi] {
            for ((a, x), y) in acc.iter_mut().zip(up).zip(vq) {
                *a += x * y;
            }
        }
    }
    SpectralField::from_samples_dealiased(grid, &acc)
}
