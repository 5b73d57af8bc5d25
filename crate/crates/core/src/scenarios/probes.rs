use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{output_dir, write_csv_rows, write_json, ExperimentConfig};
use crate::diagnostics::{commutator_probe, vishik_probe, CommutatorReport, VishikReport};
use crate::error::Result;
use crate::grid::{SpectralField, VectorField};
use crate::lp::{bernstein_ratio, LPFilterBank};
use crate::mhd::presets::{random_band_scalar, random_solenoidal};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinRow {
    pub shell: i32,
    pub upper: f64,
    pub lower: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbesReport {
    pub n: usize,
    /// Bernstein ratios of a seeded random field, one row per nonempty shell.
    pub bernstein: Vec<BernsteinRow>,
    /// Transport of `cos x + ½ sin(2x + y)` by the steady shear `(sin y, 0)`.
    pub vishik: VishikReport,
    /// Commutator sizes for a seeded random pair.
    pub commutator: CommutatorReport,
}

/// Shear datum of the transport probe.
pub fn shear_datum(
    grid: &std::sync::Arc<crate::grid::FourierGrid>,
) -> (VectorField, SpectralField) {
    let v = VectorField::from_fn(grid, |_, y| y.sin(), |_, _| 0.0);
    let f0 = SpectralField::from_fn(grid, |x, y| x.cos() + 0.5 * (2.0 * x + y).sin());
    (v, f0)
}

/// Runs the Bernstein, transport and commutator probes; with an output
/// directory writes `bernstein.csv`, `vishik.csv`, `commutator.csv` and
/// `summary.json`.
pub fn run_probes(cfg: &ExperimentConfig) -> Result<ProbesReport> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let bank = LPFilterBank::new(&grid);
    let pc = &cfg.probes;
    let mut rng = ChaCha8Rng::seed_from_u64(pc.seed);
    let f = random_band_scalar(&grid, pc.band, 1.0, &mut rng);
    let v = random_solenoidal(&grid, pc.band, &mut rng);

    let bernstein = bank
        .shells()
        .filter_map(|j| {
            bernstein_ratio(&bank, &f, j).ok().map(|b| BernsteinRow {
                shell: j,
                upper: b.upper,
                lower: b.lower,
            })
        })
        .collect();
    let (shear, f0) = shear_datum(&grid);
    let vishik = vishik_probe(&|_| shear.clone(), &f0, &bank, pc.dt, pc.t_end);
    let commutator = commutator_probe(&v, &f, &bank);
    let report = ProbesReport {
        n: grid.n(),
        bernstein,
        vishik,
        commutator,
    };
    if let Some(dir) = output_dir(cfg)? {
        write_csv_rows(&dir, "bernstein.csv", &report.bernstein)?;
        #[derive(Serialize)]
        struct VRow {
            t: f64,
            ratio: f64,
            b1_growth: f64,
        }
        let vrows: Vec<VRow> = (0..report.vishik.times.len())
            .map(|i| VRow {
                t: report.vishik.times[i],
                ratio: report.vishik.ratio[i],
                b1_growth: report.vishik.b1_growth[i],
            })
            .collect();
        write_csv_rows(&dir, "vishik.csv", &vrows)?;
        #[derive(Serialize)]
        struct CRow {
            shell: i32,
            value: f64,
        }
        let crows: Vec<CRow> = report
            .commutator
            .shells
            .iter()
            .zip(&report.commutator.values)
            .map(|(&shell, &value)| CRow { shell, value })
            .collect();
        write_csv_rows(&dir, "commutator.csv", &crows)?;
        write_json(&dir, "summary.json", &report)?;
    }
    Ok(report)
}
