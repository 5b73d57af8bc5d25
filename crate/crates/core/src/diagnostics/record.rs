use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One sample of the diagnostics time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    /// `‖u‖² + ‖b‖²`.
    pub energy: f64,
    /// `½(‖α‖² + ‖β‖²)`.
    pub elsasser_energy: f64,
    pub linf_r: f64,
    pub grad_linf_u: f64,
    pub grad_linf_b: f64,
    /// Trapezoid-rule `∫₀ᵗ (‖∇u‖_∞ + ‖∇b‖_∞)`.
    pub criterion_integral: f64,
    pub besov_e: f64,
    pub besov_h: f64,
    pub mean_alpha: [f64; 2],
    pub mean_beta: [f64; 2],
}

impl DiagnosticsRow {
    pub fn grad_sum(&self) -> f64 {
        self.grad_linf_u + self.grad_linf_b
    }
}

/// CSV layout of a row; the column order is fixed.
#[derive(Debug, Serialize, Deserialize)]
struct FlatRow {
    t: f64,
    energy: f64,
    elsasser_energy: f64,
    #[serde(rename = "linf_R")]
    linf_r: f64,
    grad_linf_u: f64,
    grad_linf_b: f64,
    criterion_integral: f64,
    #[serde(rename = "besov_E")]
    besov_e: f64,
    #[serde(rename = "besov_H")]
    besov_h: f64,
    mean_alpha_x: f64,
    mean_alpha_y: f64,
    mean_beta_x: f64,
    mean_beta_y: f64,
}

impl From<&DiagnosticsRow> for FlatRow {
    fn from(r: &DiagnosticsRow) -> Self {
        Self {
            t: r.t,
            energy: r.energy,
            elsasser_energy: r.elsasser_energy,
            linf_r: r.linf_r,
            grad_linf_u: r.grad_linf_u,
            grad_linf_b: r.grad_linf_b,
            criterion_integral: r.criterion_integral,
            besov_e: r.besov_e,
            besov_h: r.besov_h,
            mean_alpha_x: r.mean_alpha[0],
            mean_alpha_y: r.mean_alpha[1],
            mean_beta_x: r.mean_beta[0],
            mean_beta_y: r.mean_beta[1],
        }
    }
}

impl From<FlatRow> for DiagnosticsRow {
    fn from(r: FlatRow) -> Self {
        Self {
            t: r.t,
            energy: r.energy,
            elsasser_energy: r.elsasser_energy,
            linf_r: r.linf_r,
            grad_linf_u: r.grad_linf_u,
            grad_linf_b: r.grad_linf_b,
            criterion_integral: r.criterion_integral,
            besov_e: r.besov_e,
            besov_h: r.besov_h,
            mean_alpha: [r.mean_alpha_x, r.mean_alpha_y],
            mean_beta: [r.mean_beta_x, r.mean_beta_y],
        }
    }
}

/// Time series of diagnostics; `t` strictly increases along the rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsRecord {
    rows: Vec<DiagnosticsRow>,
}

impl DiagnosticsRecord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a record from rows, e.g. for synthetic checks.
    ///
    /// # Panics
    /// If the times are not strictly increasing.
    pub fn from_rows(rows: Vec<DiagnosticsRow>) -> Self {
        let mut rec = Self::new();
        for r in rows {
            rec.push(r);
        }
        rec
    }

    /// # Panics
    /// If `row.t` does not exceed the last recorded time.
    pub fn push(&mut self, row: DiagnosticsRow) {
        if let Some(last) = self.rows.last() {
            assert!(
                row.t > last.t,
                "diagnostics time must increase ({} after {})",
                row.t,
                last.t
            );
        }
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[DiagnosticsRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first(&self) -> Option<&DiagnosticsRow> {
        self.rows.first()
    }

    pub fn last(&self) -> Option<&DiagnosticsRow> {
        self.rows.last()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(FlatRow::from(r))?;
        }
        if self.rows.is_empty() {
            // header only
            out.write_record(CSV_COLUMNS)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(r);
        let mut rows = Vec::new();
        for rec in input.deserialize::<FlatRow>() {
            rows.push(rec?.into());
        }
        Ok(Self { rows })
    }
}

/// Column names of the CSV output, in order.
pub const CSV_COLUMNS: [&str; 13] = [
    "t",
    "energy",
    "elsasser_energy",
    "linf_R",
    "grad_linf_u",
    "grad_linf_b",
    "criterion_integral",
    "besov_E",
    "besov_H",
    "mean_alpha_x",
    "mean_alpha_y",
    "mean_beta_x",
    "mean_beta_y",
];

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, energy: f64) -> DiagnosticsRow {
        DiagnosticsRow {
            t,
            energy,
            elsasser_energy: energy,
            linf_r: 1.0,
            grad_linf_u: 0.5,
            grad_linf_b: 0.25,
            criterion_integral: 0.75 * t,
            besov_e: 2.0,
            besov_h: 3.0,
            mean_alpha: [0.1, -0.2],
            mean_beta: [0.3, 0.4],
        }
    }

    #[test]
    fn csv_roundtrip_and_header() {
        let rec = DiagnosticsRecord::from_rows(vec![row(0.0, 1.0), row(0.5, 1.25)]);
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(DiagnosticsRecord::read_csv(&buf[..]).unwrap(), rec);

        let mut buf = Vec::new();
        DiagnosticsRecord::new().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap().trim(),
            CSV_COLUMNS.join(",")
        );
    }

    #[test]
    #[should_panic(expected = "must increase")]
    fn time_must_increase() {
        DiagnosticsRecord::from_rows(vec![row(1.0, 1.0), row(1.0, 1.0)]);
    }
}
