//! Power-law fits `q ≈ c (T − t)^p` near a finite-time singularity.
//!
//! For a trial singular time `T` the model is linear in log space,
//! `ln|q| = ln|c| + p ln(T − t)`, so `(c, p)` follow from ordinary least
//! squares. `T` itself is found by scanning a log-spaced grid of gaps
//! `T − t_last` and polishing the best cell with a golden-section search.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow3d::{SeriesSample, SeriesTrajectory};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Amplitude, carrying the sign of the data.
    pub c: f64,
    /// Exponent.
    pub p: f64,
    /// Singular time.
    pub t_pinch: f64,
    /// Residual sum of squares of `ln|q|`.
    pub rss: f64,
    /// Time span of the samples used.
    pub window: (f64, f64),
    /// Residual sum of squares with `T` moved 1% of `T − t_last` later.
    pub rss_perturbed: f64,
    /// True when the best `T` sits on the edge of the search bracket.
    pub at_bracket_edge: bool,
}

impl PowerLawFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.c * (self.t_pinch - t).powf(self.p)
    }

    /// `rss_perturbed / rss`; large values mean `T` is well determined.
    pub fn conditioning(&self) -> f64 {
        if self.rss > 0.0 {
            self.rss_perturbed / self.rss
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Search interval for `T`. Defaults to `[t_last + 1e-9, t_last + 1e-5]`.
    pub bracket: Option<(f64, f64)>,
    /// Number of grid points across the bracket.
    pub grid: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            bracket: None,
            grid: 10_000,
        }
    }
}

struct LogData {
    t: Vec<f64>,
    y: Vec<f64>,
    sign: f64,
}

impl LogData {
    fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Fit(format!(
                "need at least 4 samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|(t, q)| !t.is_finite() || !q.is_finite()) {
            return Err(Error::Fit("non-finite sample".into()));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Fit("sample times must be strictly increasing".into()));
        }
        let sign = samples[0].1.signum();
        if samples.iter().any(|&(_, q)| q == 0.0 || q.signum() != sign) {
            return Err(Error::Fit("samples change sign or vanish".into()));
        }
        Ok(Self {
            t: samples.iter().map(|s| s.0).collect(),
            y: samples.iter().map(|s| s.1.abs().ln()).collect(),
            sign,
        })
    }

    fn t_last(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    /// Least-squares `(ln|c|, p, rss)` for a fixed singular time.
    fn regress(&self, t_pinch: f64) -> (f64, f64, f64) {
        let n = self.t.len() as f64;
        let x: Vec<f64> = self.t.iter().map(|t| (t_pinch - t).ln()).collect();
        let mx = x.iter().sum::<f64>() / n;
        let my = self.y.iter().sum::<f64>() / n;
        let (mut sxx, mut sxy) = (0.0, 0.0);
        for (xi, yi) in x.iter().zip(&self.y) {
            sxx += (xi - mx) * (xi - mx);
            sxy += (xi - mx) * (yi - my);
        }
        let p = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let a = my - p * mx;
        let rss = x
            .iter()
            .zip(&self.y)
            .map(|(xi, yi)| (yi - a - p * xi).powi(2))
            .sum();
        (a, p, rss)
    }

    fn fit_at(&self, t_pinch: f64) -> PowerLawFit {
        let (a, p, rss) = self.regress(t_pinch);
        let gap = t_pinch - self.t_last();
        let (_, _, rss_perturbed) = self.regress(t_pinch + 0.01 * gap);
        PowerLawFit {
            c: self.sign * a.exp(),
            p,
            t_pinch,
            rss,
            window: (self.t[0], self.t_last()),
            rss_perturbed,
            at_bracket_edge: false,
        }
    }
}

/// Fits `q ≈ c (T − t)^p` with `T` searched over the configured bracket.
pub fn fit_power_law(samples: &[(f64, f64)], cfg: &FitConfig) -> Result<PowerLawFit> {
    let data = LogData::new(samples)?;
    let t_last = data.t_last();
    let (lo, hi) = cfg.bracket.unwrap_or((t_last + 1e-9, t_last + 1e-5));
    if !(lo > t_last && hi > lo) {
        return Err(Error::Fit(format!(
            "empty bracket [{lo}, {hi}] for last sample time {t_last}"
        )));
    }
    if cfg.grid < 2 {
        return Err(Error::Fit("grid needs at least 2 points".into()));
    }

    // Log-spaced gaps resolve T near t_last, where the data constrain it.
    let (g_lo, g_hi) = ((lo - t_last).ln(), (hi - t_last).ln());
    let gap_at = |k: usize| (g_lo + (g_hi - g_lo) * k as f64 / (cfg.grid - 1) as f64).exp();
    let rss_at = |log_gap: f64| data.regress(t_last + log_gap.exp()).2;

    let mut best = 0;
    let mut best_rss = f64::INFINITY;
    for k in 0..cfg.grid {
        let rss = data.regress(t_last + gap_at(k)).2;
        if rss < best_rss {
            best_rss = rss;
            best = k;
        }
    }

    let left = gap_at(best.saturating_sub(1)).ln();
    let right = gap_at((best + 1).min(cfg.grid - 1)).ln();
    let log_gap = golden_min(rss_at, left, right, 80);
    let log_gap = if rss_at(log_gap) <= best_rss {
        log_gap
    } else {
        gap_at(best).ln()
    };

    let mut fit = data.fit_at(t_last + log_gap.exp());
    fit.at_bracket_edge = best == 0 || best == cfg.grid - 1;
    Ok(fit)
}

/// Fits `(c, p)` with the singular time held fixed.
pub fn fit_power_law_pinned(samples: &[(f64, f64)], t_pinch: f64) -> Result<PowerLawFit> {
    let data = LogData::new(samples)?;
    if !(t_pinch > data.t_last()) {
        return Err(Error::Fit(format!(
            "pinned time {t_pinch} is not after the last sample {}",
            data.t_last()
        )));
    }
    Ok(data.fit_at(t_pinch))
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Neck quantity that can be fitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "m")]
    M,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "R")]
    R,
    #[serde(rename = "Kab")]
    Kab,
    #[serde(rename = "Kbc")]
    Kbc,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [Quantity::M, Quantity::H, Quantity::R, Quantity::Kab, Quantity::Kbc];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::M => "m",
            Quantity::H => "h",
            Quantity::R => "R",
            Quantity::Kab => "Kab",
            Quantity::Kbc => "Kbc",
        }
    }

    pub fn of(&self, s: &SeriesSample) -> f64 {
        match self {
            Quantity::M => s.state.m0(),
            Quantity::H => s.state.h0(),
            Quantity::R => s.curvature.scalar,
            Quantity::Kab => s.curvature.k_ab,
            Quantity::Kbc => s.curvature.k_bc,
        }
    }

    /// Reference `(c, p, T)` for the example neck.
    pub fn reference_law(&self) -> ReferenceLaw {
        let (c, p, t_pinch) = match self {
            Quantity::M => (1.409, 0.985, 0.0000793514),
            Quantity::H => (1.705, -0.235, 0.0000793529),
            Quantity::R => (0.570, -1.025, 0.0000793515),
            Quantity::Kab => (-1.142, -0.826, 0.0000793513),
            Quantity::Kbc => (0.698, -0.986, 0.0000793514),
        };
        ReferenceLaw { c, p, t_pinch }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Fit(format!("unknown quantity {s:?} (expected m|h|R|Kab|Kbc)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLaw {
    pub c: f64,
    pub p: f64,
    pub t_pinch: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub quantity: Quantity,
    pub fit: PowerLawFit,
    pub reference: ReferenceLaw,
}

impl FitRow {
    pub fn exponent_error(&self) -> f64 {
        self.fit.p - self.reference.p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub rows: Vec<FitRow>,
    /// `h` refitted with `T` pinned to the pinch time fitted for `m`.
    pub h_pinned: PowerLawFit,
    /// Known tensions between the fitted laws.
    pub notes: Vec<String>,
}

impl FitReport {
    pub fn row(&self, q: Quantity) -> Option<&FitRow> {
        self.rows.iter().find(|r| r.quantity == q)
    }
}

/// Samples of one quantity at the requested times of a trajectory.
pub fn quantity_samples(traj: &SeriesTrajectory, q: Quantity) -> Vec<(f64, f64)> {
    traj.requested().map(|s| (s.t, q.of(s))).collect()
}

/// Fits every neck quantity over the requested sample times.
pub fn fit_report(traj: &SeriesTrajectory, cfg: &FitConfig) -> Result<FitReport> {
    fit_table(|q| quantity_samples(traj, q), traj.last.k2, cfg)
}

/// Fits every neck quantity from per-quantity samples; `k2` is used to
/// check the fitted `m` and `Kbc` laws against each other.
pub fn fit_table(
    samples: impl Fn(Quantity) -> Vec<(f64, f64)>,
    k2: f64,
    cfg: &FitConfig,
) -> Result<FitReport> {
    let mut rows = Vec::with_capacity(Quantity::ALL.len());
    for q in Quantity::ALL {
        let fit = fit_power_law(&samples(q), cfg)?;
        rows.push(FitRow {
            quantity: q,
            fit,
            reference: q.reference_law(),
        });
    }
    let fit_of = |q: Quantity| rows.iter().find(|r| r.quantity == q).map(|r| r.fit);
    let (m, h, kbc) = (
        fit_of(Quantity::M).expect("m row"),
        fit_of(Quantity::H).expect("h row"),
        fit_of(Quantity::Kbc).expect("Kbc row"),
    );
    let h_pinned = fit_power_law_pinned(&samples(Quantity::H), m.t_pinch)?;

    let mut notes = Vec::new();
    let window = m.window.1 - m.window.0;
    if h.t_pinch - m.t_pinch > 1e-3 * window {
        notes.push(format!(
            "h diverges later than m vanishes: T_h - T_m = {:.3e}",
            h.t_pinch - m.t_pinch
        ));
    }
    let product_c = m.c * kbc.c;
    let product_p = m.p + kbc.p;
    if (product_c - k2).abs() > 1e-3 * k2.abs() || product_p.abs() > 1e-3 {
        notes.push(format!(
            "fitted m and Kbc laws do not multiply to K2 = {k2}: c_m*c_Kbc = {product_c:.4}, p_m + p_Kbc = {product_p:.4}"
        ));
    }
    for row in &rows {
        if row.fit.at_bracket_edge {
            notes.push(format!("{}: best T on the bracket edge", row.quantity));
        }
    }
    Ok(FitReport {
        rows,
        h_pinned,
        notes,
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn law(c: f64, p: f64, t_pinch: f64, ts: &[f64]) -> Vec<(f64, f64)> {
        ts.iter().map(|&t| (t, c * (t_pinch - t).powf(p))).collect()
    }

    #[test]
    fn recovers_inverse_square_root() {
        let ts: Vec<f64> = (0..7).map(|k| 0.9e-4 + k as f64 * 1e-6).collect();
        let fit = fit_power_law(&law(2.0, -0.5, 1e-4, &ts), &FitConfig::default()).unwrap();
        assert!((fit.p + 0.5).abs() < 1e-6, "{fit:?}");
        assert!((fit.c - 2.0).abs() < 1e-4);
        assert!((fit.t_pinch - 1e-4).abs() < 1e-12);
        assert!(fit.rss < 1e-15);
    }

    #[test]
    fn constant_data_has_zero_exponent() {
        let s: Vec<_> = (0..5).map(|k| (k as f64 * 1e-6, 3.5)).collect();
        let fit = fit_power_law(&s, &FitConfig::default()).unwrap();
        assert!(fit.p.abs() < 1e-12);
        assert!((fit.c - 3.5).abs() < 1e-12);
        assert!(fit.rss < 1e-20);
    }

    #[test]
    fn negative_data_keeps_sign() {
        let ts: Vec<f64> = (0..6).map(|k| k as f64 * 1e-7).collect();
        let fit = fit_power_law(&law(-1.1, -0.8, 1e-6, &ts), &FitConfig::default()).unwrap();
        assert!(fit.c < 0.0);
        assert!((fit.p + 0.8).abs() < 1e-6);
    }

    #[test]
    fn sign_change_rejected() {
        let s = vec![(0.0, 1.0), (1.0, 2.0), (2.0, -1.0), (3.0, 1.0)];
        assert!(matches!(fit_power_law(&s, &FitConfig::default()), Err(Error::Fit(_))));
    }

    #[test]
    fn too_few_samples_rejected() {
        let s = vec![(0.0, 1.0), (1.0, 2.0), (2.0, 1.0)];
        assert!(fit_power_law(&s, &FitConfig::default()).is_err());
    }

    #[test]
    fn empty_bracket_rejected() {
        let s: Vec<_> = (0..5).map(|k| (k as f64, 1.0 + k as f64)).collect();
        let cfg = FitConfig {
            bracket: Some((3.0, 10.0)),
            grid: 100,
        };
        assert!(fit_power_law(&s, &cfg).is_err());
        let cfg = FitConfig {
            bracket: Some((6.0, 5.5)),
            grid: 100,
        };
        assert!(fit_power_law(&s, &cfg).is_err());
    }

    #[test]
    fn pinned_fit_uses_given_time() {
        let ts: Vec<f64> = (0..6).map(|k| k as f64 * 0.1).collect();
        let fit = fit_power_law_pinned(&law(0.5, 1.0, 1.0, &ts), 1.0).unwrap();
        assert_eq!(fit.t_pinch, 1.0);
        assert!((fit.p - 1.0).abs() < 1e-12);
        assert!(fit_power_law_pinned(&law(0.5, 1.0, 1.0, &ts), 0.5).is_err());
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
        }
        assert!("x".parse::<Quantity>().is_err());
    }
}
