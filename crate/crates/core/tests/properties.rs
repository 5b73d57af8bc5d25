use std::sync::Arc;

use mhd_core::diagnostics::{besov_e_h, energy, iterated_log};
use mhd_core::grid::{
    divergence, fft_roundtrip, leray_project, FourierGrid, SpectralField, VectorField,
};
use mhd_core::lp::LPFilterBank;
use mhd_core::mhd::presets::random_solenoidal;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid() -> Arc<FourierGrid> {
    FourierGrid::shared(32).unwrap()
}

fn field_from(g: &Arc<FourierGrid>, vals: &[f64]) -> SpectralField {
    let samples: Vec<f64> = (0..g.len())
        .map(|i| vals[i % vals.len()] * ((i * 7 % 13) as f64 - 6.0))
        .collect();
    SpectralField::from_samples(g, &samples)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fft_roundtrip_is_identity(vals in prop::collection::vec(-1.0f64..1.0, 1..64)) {
        let g = grid();
        let f = field_from(&g, &vals);
        prop_assert!(fft_roundtrip(&f).max_difference(&f) < 1e-12);
    }

    #[test]
    fn leray_is_idempotent_and_solenoidal(a in prop::collection::vec(-1.0f64..1.0, 1..64), b in prop::collection::vec(-1.0f64..1.0, 1..64)) {
        let g = grid();
        let v = VectorField::new(field_from(&g, &a), field_from(&g, &b));
        let p = leray_project(&v);
        prop_assert!(divergence(&p).max_abs() < 1e-10);
        prop_assert!(leray_project(&p).max_difference(&p) < 1e-12);
        // the projection keeps the mean
        prop_assert!((p.mean()[0] - v.mean()[0]).abs() < 1e-12);
    }

    #[test]
    fn e_is_dominated_by_h(seed in any::<u64>(), band in 2.0f64..10.0) {
        let g = grid();
        let bank = LPFilterBank::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_solenoidal(&g, band, &mut rng);
        let b = random_solenoidal(&g, band, &mut rng);
        let s = mhd_core::mhd::MhdState::new(SpectralField::zeros(&g), u, b);
        let (e, h) = besov_e_h(&s.to_vorticity(), &bank);
        prop_assert!(e <= h * (1.0 + 1e-12), "E = {e}, H = {h}");
        prop_assert!(energy(&s) > 0.0);
    }

    #[test]
    fn iterated_log_contracts(z in 1e-6f64..1e12, c in 0.1f64..10.0) {
        let l3 = iterated_log(z, c, 3);
        let l4 = iterated_log(z, c, 4);
        // log(1 + x) <= x
        prop_assert!(l4 <= c * l3 * (1.0 + 1e-12));
        prop_assert!(l3 > 0.0);
    }
}
