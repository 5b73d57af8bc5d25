//! SVG line plots of a diagnostics record.

use std::path::Path;

use anyhow::{anyhow, Result};
use mhd_core::diagnostics::{DiagnosticsRecord, DiagnosticsRow};
use plotters::prelude::*;

fn line_plot(path: &Path, title: &str, points: &[(f64, f64)]) -> Result<()> {
    let root = SVGBackend::new(path, (640, 400)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| anyhow!("{e}"))?;
    let (t0, t1) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.0), b.max(p.0))
        });
    let (y0, y1) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.1), b.max(p.1))
        });
    // flat series still need a nonempty range
    let pad = ((y1 - y0).abs() * 0.05).max(1e-12 * y1.abs().max(1.0));
    let t1 = if t1 > t0 { t1 } else { t0 + 1.0 };
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(30)
        .y_label_area_size(60)
        .build_cartesian_2d(t0..t1, (y0 - pad)..(y1 + pad))
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .configure_mesh()
        .x_desc("t")
        .draw()
        .map_err(|e| anyhow!("{e}"))?;
    chart
        .draw_series(LineSeries::new(points.iter().copied(), &BLUE))
        .map_err(|e| anyhow!("{e}"))?;
    root.present().map_err(|e| anyhow!("{e}"))?;
    Ok(())
}

/// Writes `energy.svg`, `besov_E.svg` and `criterion.svg` into `dir`.
pub fn write_plots(dir: &Path, rec: &DiagnosticsRecord) -> Result<()> {
    let series = |f: fn(&DiagnosticsRow) -> f64| -> Vec<(f64, f64)> {
        rec.rows().iter().map(|r| (r.t, f(r))).collect()
    };
    line_plot(&dir.join("energy.svg"), "energy", &series(|r| r.energy))?;
    line_plot(&dir.join("besov_E.svg"), "E(t)", &series(|r| r.besov_e))?;
    line_plot(
        &dir.join("criterion.svg"),
        "continuation integral",
        &series(|r| r.criterion_integral),
    )?;
    Ok(())
}
