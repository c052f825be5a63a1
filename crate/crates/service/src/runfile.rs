//! CSV files written and read by the command line.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use ricci_rev::fit::{FitReport, FitRow, PowerLawFit, Quantity};
use ricci_rev::flow2d::Diagnostics;
use ricci_rev::flow3d::{SeriesSample, SeriesTrajectory};

use crate::error::Result;

/// One row of a series run: neck values at ρ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeckRow {
    pub t: f64,
    pub m0: f64,
    pub h0: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "Kab")]
    pub k_ab: f64,
    #[serde(rename = "Kbc")]
    pub k_bc: f64,
    pub k2: f64,
    /// 1 for rows at requested sample times.
    pub requested: u8,
}

impl NeckRow {
    pub fn of(s: &SeriesSample, k2: f64) -> Self {
        Self {
            t: s.t,
            m0: s.state.m0(),
            h0: s.state.h0(),
            r: s.curvature.scalar,
            k_ab: s.curvature.k_ab,
            k_bc: s.curvature.k_bc,
            k2,
            requested: s.requested as u8,
        }
    }

    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::M => self.m0,
            Quantity::H => self.h0,
            Quantity::R => self.r,
            Quantity::Kab => self.k_ab,
            Quantity::Kbc => self.k_bc,
        }
    }
}

pub fn write_series_run<W: Write>(traj: &SeriesTrajectory, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for s in &traj.samples {
        out.serialize(NeckRow::of(s, traj.last.k2))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_series_run<R: Read>(r: R) -> Result<Vec<NeckRow>> {
    let mut rows = Vec::new();
    for row in csv::Reader::from_reader(r).deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

/// Samples used for fitting: the requested rows if there are any,
/// otherwise every row.
pub fn fit_samples(rows: &[NeckRow], q: Quantity) -> Vec<(f64, f64)> {
    let any_requested = rows.iter().any(|r| r.requested == 1);
    rows.iter()
        .filter(|r| !any_requested || r.requested == 1)
        .map(|r| (r.t, r.get(q)))
        .collect()
}

pub fn write_diagnostics<W: Write>(diags: &[Diagnostics], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for d in diags {
        out.serialize(d)?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct FitCsvRow {
    pub quantity: String,
    pub c: f64,
    pub p: f64,
    #[serde(rename = "T")]
    pub t_pinch: f64,
    pub rss: f64,
    pub rss_perturbed: f64,
    pub conditioning: f64,
    pub t_first: f64,
    pub t_last: f64,
    pub ref_c: Option<f64>,
    pub ref_p: Option<f64>,
    #[serde(rename = "ref_T")]
    pub ref_t_pinch: Option<f64>,
}

impl FitCsvRow {
    pub fn new(label: &str, fit: &PowerLawFit, reference: Option<Quantity>) -> Self {
        let r = reference.map(|q| q.reference_law());
        Self {
            quantity: label.to_string(),
            c: fit.c,
            p: fit.p,
            t_pinch: fit.t_pinch,
            rss: fit.rss,
            rss_perturbed: fit.rss_perturbed,
            conditioning: fit.conditioning(),
            t_first: fit.window.0,
            t_last: fit.window.1,
            ref_c: r.map(|r| r.c),
            ref_p: r.map(|r| r.p),
            ref_t_pinch: r.map(|r| r.t_pinch),
        }
    }

    fn of_row(row: &FitRow) -> Self {
        Self::new(row.quantity.name(), &row.fit, Some(row.quantity))
    }
}

pub fn write_fit_rows<W: Write>(rows: &[FitCsvRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// The five fitted rows followed by `h` with `T` pinned to the `m` fit.
pub fn report_rows(report: &FitReport) -> Vec<FitCsvRow> {
    let mut rows: Vec<FitCsvRow> = report.rows.iter().map(FitCsvRow::of_row).collect();
    rows.push(FitCsvRow::new("h_pinned", &report.h_pinned, None));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neck_rows_round_trip() {
        let rows = vec![
            NeckRow {
                t: 1e-5,
                m0: 9e-5,
                h0: 1.0,
                r: 2.0,
                k_ab: -0.5,
                k_bc: 1.1e4,
                k2: 1.0,
                requested: 1,
            },
            NeckRow {
                t: 2e-5,
                m0: 8e-5,
                h0: 1.1,
                r: 3.0,
                k_ab: -0.7,
                k_bc: 1.25e4,
                k2: 1.0,
                requested: 0,
            },
        ];
        let mut buf = Vec::new();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            for r in &rows {
                w.serialize(r).unwrap();
            }
        }
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,m0,h0,R,Kab,Kbc,k2,requested"));
        let back = read_series_run(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
        assert_eq!(fit_samples(&back, Quantity::M), vec![(1e-5, 9e-5)]);
    }

    #[test]
    fn diagnostics_header() {
        let d = Diagnostics {
            t: 0.0,
            h_const: 1.0,
            area: 12.5,
            total_curvature: 12.5,
            max_ratio: 0.99,
            min_m: 1e-3,
        };
        let mut buf = Vec::new();
        write_diagnostics(&[d], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "t,h_const,area,total_curvature,max_ratio,min_m"
        );
    }
}
