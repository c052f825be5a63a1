//! Neck-center power-series integrator.
//!
//! `h` and `m` are expanded in even powers of ρ about the neck through
//! order 10. The flow equations are evaluated in truncated series
//! arithmetic, which gives the time derivative of every coefficient, and
//! the coefficients are advanced by adaptive explicit Euler.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow3d::rhs::{curvatures_at, NeckCurvature};
use crate::profile::FlowStatus;
use crate::series::{Series, LEN};

/// Number of even coefficients `c₀, c₂, …, c₁₀`.
pub const EVEN_LEN: usize = LEN / 2 + 1;

/// Truncated even expansions of `h` and `m` about ρ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesState {
    /// `h₀, h₂, …, h₁₀`.
    pub h: [f64; EVEN_LEN],
    /// `m₀, m₂, …, m₁₀`.
    pub m: [f64; EVEN_LEN],
    pub k2: f64,
    pub t: f64,
}

impl SeriesState {
    /// The example neck: `h = 1`, `m = 10⁻⁴ + sin²(9πρ/40)`, `K₂ = 1`.
    pub fn example_neck() -> Self {
        Self::sine_squared_neck(1e-4, 9.0 * std::f64::consts::PI / 40.0, 1.0)
    }

    /// `h = 1`, `m = m0 + sin²(aρ)` expanded through ρ¹⁰.
    pub fn sine_squared_neck(m0: f64, a: f64, k2: f64) -> Self {
        // sin²(aρ) = (1 − cos 2aρ)/2 = Σ_{k≥1} (−1)^{k+1} (2a)^{2k} ρ^{2k} / (2 (2k)!)
        let mut m = [0.0; EVEN_LEN];
        m[0] = m0;
        let mut factorial = 1.0;
        for k in 1..EVEN_LEN {
            let n = 2 * k;
            factorial *= ((n - 1) * n) as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            m[k] = sign * (2.0 * a).powi(n as i32) / (2.0 * factorial);
        }
        let mut h = [0.0; EVEN_LEN];
        h[0] = 1.0;
        Self { h, m, k2, t: 0.0 }
    }

    /// A neck of constant radius: `h = 1`, `m = m0`.
    pub fn cylinder(m0: f64, k2: f64) -> Self {
        let mut h = [0.0; EVEN_LEN];
        let mut m = [0.0; EVEN_LEN];
        h[0] = 1.0;
        m[0] = m0;
        Self { h, m, k2, t: 0.0 }
    }

    pub fn h_series(&self) -> Series {
        Series::from_even(&self.h)
    }

    pub fn m_series(&self) -> Series {
        Series::from_even(&self.m)
    }

    pub fn m0(&self) -> f64 {
        self.m[0]
    }

    pub fn h0(&self) -> f64 {
        self.h[0]
    }

    /// Curvatures at ρ = 0, where `m′ = h′ = 0` and `m″ = 2m₂`.
    pub fn neck_curvature(&self) -> NeckCurvature {
        curvatures_at(self.h[0], 0.0, self.m[0], 0.0, 2.0 * self.m[1], self.k2)
    }

    pub fn is_finite(&self) -> bool {
        self.h.iter().chain(&self.m).all(|c| c.is_finite())
    }
}

/// Time derivatives of the even coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesRates {
    pub h: [f64; EVEN_LEN],
    pub m: [f64; EVEN_LEN],
}

/// Flow right-hand sides as full (odd and even) truncated series.
pub fn series_rhs_full(s: &SeriesState) -> Result<(Series, Series)> {
    if s.m[0] <= 0.0 {
        return Err(Error::Pinched {
            t: s.t,
            detail: format!("m0 = {}", s.m[0]),
        });
    }
    if s.h[0] <= 0.0 {
        return Err(Error::Unstable {
            t: s.t,
            detail: format!("h0 = {}", s.h[0]),
        });
    }
    let h = s.h_series();
    let m = s.m_series();
    let h1 = h.derivative();
    let m1 = m.derivative();
    let m2 = m1.derivative();

    // ∂h/∂t = 2m″/m − (m′)²/m² − m′h′/(mh)
    let h_dot = m2.scale(2.0).div(&m)? - (m1 * m1).div(&(m * m))? - (m1 * h1).div(&(m * h))?;
    // ∂m/∂t = m″/h − m′h′/(2h²) − 2K₂
    let m_dot = m2.div(&h)? - (m1 * h1).div(&(h * h).scale(2.0))? - Series::constant(2.0 * s.k2);
    Ok((h_dot, m_dot))
}

/// Coefficient time derivatives of the even expansions.
pub fn series_rhs(s: &SeriesState) -> Result<SeriesRates> {
    let (h_dot, m_dot) = series_rhs_full(s)?;
    Ok(SeriesRates {
        h: h_dot.even_part(),
        m: m_dot.even_part(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesFlowConfig {
    /// Bound on the relative change per step.
    pub eta: f64,
    /// Smallest step the controller may halve down to.
    pub dt_min: f64,
    /// First trial step.
    pub dt_initial: f64,
    /// Stop once `m₀` falls to this value.
    pub stop_m0: f64,
    /// Times that are hit exactly and recorded.
    pub sample_times: Vec<f64>,
    /// Additionally record every `record_every`-th step, if set.
    pub record_every: Option<usize>,
    /// Hard cap on the number of steps.
    pub max_steps: usize,
}

/// Times at which the neck quantities were fitted to power laws.
pub const FIT_SAMPLE_TIMES: [f64; 7] = [
    0.000079300,
    0.000079310,
    0.000079320,
    0.000079330,
    0.000079340,
    0.000079345,
    0.000079350,
];

/// Reference pinch-time estimate for [`SeriesState::example_neck`].
pub const REFERENCE_PINCH_TIME: f64 = 0.0000793514;

impl Default for SeriesFlowConfig {
    fn default() -> Self {
        Self {
            eta: 1e-3,
            dt_min: 1e-20,
            dt_initial: 1e-9,
            stop_m0: 1e-12,
            sample_times: Vec::new(),
            record_every: None,
            max_steps: 200_000_000,
        }
    }
}

impl SeriesFlowConfig {
    /// Configuration for the reference scaling fits: the
    /// fit sample times and a step bound small enough that the
    /// integration error in the pinch time is well below the spacing of
    /// those samples.
    pub fn reference() -> Self {
        Self {
            eta: 2e-6,
            sample_times: FIT_SAMPLE_TIMES.to_vec(),
            record_every: Some(2000),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidConfig(format!("eta = {} not in (0, 1)", self.eta)));
        }
        if !(self.stop_m0 > 0.0) {
            return Err(Error::InvalidConfig(format!("stop_m0 = {} must be positive", self.stop_m0)));
        }
        if !(self.dt_min > 0.0 && self.dt_initial >= self.dt_min) {
            return Err(Error::InvalidConfig("need 0 < dt_min <= dt_initial".into()));
        }
        if self.sample_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidConfig("sample times must be nondecreasing".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSample {
    pub t: f64,
    pub state: SeriesState,
    pub curvature: NeckCurvature,
    /// True when `t` is one of the requested sample times.
    pub requested: bool,
}

impl SeriesSample {
    fn of(state: SeriesState, requested: bool) -> Self {
        Self {
            t: state.t,
            state,
            curvature: state.neck_curvature(),
            requested,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeriesTrajectory {
    pub samples: Vec<SeriesSample>,
    pub last: SeriesState,
    /// `ṁ₀` at the last state.
    pub last_m0_rate: f64,
    pub steps: usize,
    pub status: FlowStatus,
}

impl SeriesTrajectory {
    /// Samples taken at the requested times, in order.
    pub fn requested(&self) -> impl Iterator<Item = &SeriesSample> {
        self.samples.iter().filter(|s| s.requested)
    }

    /// Pinch time from linear extrapolation of `m₀` at the last state.
    pub fn extrapolated_pinch_time(&self) -> f64 {
        if self.last_m0_rate < 0.0 {
            self.last.t + self.last.m[0] / -self.last_m0_rate
        } else {
            f64::INFINITY
        }
    }
}

/// Largest relative change per unit time of `m₀`, `h₀`, and of each series
/// in the norm `Σ |c_k| ℓ^{2k}`, where `ℓ = √(m₀/|m₂|)` is the neck width.
///
/// Individual higher coefficients cross zero, and their magnitudes scale
/// like `ℓ^{-2k}`, so they are compared at the neck scale rather than one by
/// one.
fn relative_rate(s: &SeriesState, r: &SeriesRates) -> f64 {
    let width2 = if s.m[1] != 0.0 {
        (s.m[0] / s.m[1]).abs()
    } else {
        1.0
    };
    let weighted = |c: &[f64; EVEN_LEN]| {
        let mut w = 1.0;
        let mut acc = 0.0;
        for v in c {
            acc += v.abs() * w;
            w *= width2;
        }
        acc
    };
    let lead = (r.m[0] / s.m[0]).abs().max((r.h[0] / s.h[0]).abs());
    let whole_m = weighted(&r.m) / weighted(&s.m);
    let whole_h = weighted(&r.h) / weighted(&s.h);
    lead.max(whole_m).max(whole_h)
}

/// Integrates until `m₀ ≤ stop_m0`.
///
/// Each step starts from twice the previous step, is halved until the
/// relative change bound `eta` holds, and is shortened to land exactly on
/// the next requested sample time.
pub fn series_flow(start: &SeriesState, cfg: &SeriesFlowConfig) -> Result<SeriesTrajectory> {
    cfg.validate()?;
    let mut s = *start;
    let mut samples = vec![SeriesSample::of(s, false)];
    let t_start = s.t;
    let mut pending = cfg
        .sample_times
        .iter()
        .copied()
        .filter(move |&t| t >= t_start)
        .peekable();
    while pending.peek() == Some(&s.t) {
        samples[0].requested = true;
        pending.next();
    }

    let mut dt = cfg.dt_initial;
    let mut steps = 0usize;
    let mut last_rate = series_rhs(&s)?.m[0];
    while s.m[0] > cfg.stop_m0 {
        if steps >= cfg.max_steps {
            return Err(Error::Unstable {
                t: s.t,
                detail: format!("step limit {} reached with m0 = {}", cfg.max_steps, s.m[0]),
            });
        }
        let rates = series_rhs(&s)?;
        last_rate = rates.m[0];
        let speed = relative_rate(&s, &rates);
        dt *= 2.0;
        while dt * speed > cfg.eta {
            dt *= 0.5;
            if dt < cfg.dt_min {
                return Err(Error::Unstable {
                    t: s.t,
                    detail: format!("step fell below dt_min = {} (m0 = {})", cfg.dt_min, s.m[0]),
                });
            }
        }
        let controlled = dt;
        let mut hit = false;
        if let Some(&next) = pending.peek() {
            if s.t + dt >= next {
                dt = next - s.t;
                hit = true;
            }
        }
        let mut next = s;
        for k in 0..EVEN_LEN {
            next.h[k] += dt * rates.h[k];
            next.m[k] += dt * rates.m[k];
        }
        next.t = if hit { pending.next().unwrap_or(s.t + dt) } else { s.t + dt };
        if !next.is_finite() {
            return Err(Error::Unstable {
                t: next.t,
                detail: "non-finite series coefficient".into(),
            });
        }
        s = next;
        steps += 1;
        let stride = cfg.record_every.is_some_and(|k| steps % k == 0);
        if hit || stride {
            samples.push(SeriesSample::of(s, hit));
        }
        // Several requested times may coincide.
        while pending.peek() == Some(&s.t) {
            pending.next();
        }
        // A step shortened to land on a sample does not shrink the next one.
        dt = controlled;
    }
    if samples.last().map(|x| x.t) != Some(s.t) {
        samples.push(SeriesSample::of(s, false));
    }
    if let Ok(r) = series_rhs(&s) {
        last_rate = r.m[0];
    }
    let status = if s.m[0] <= cfg.stop_m0 {
        FlowStatus::Pinched
    } else {
        FlowStatus::Ok
    };
    Ok(SeriesTrajectory {
        samples,
        last: s,
        last_m0_rate: last_rate,
        steps,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_squared_coefficients() {
        let a: f64 = 0.7;
        let s = SeriesState::sine_squared_neck(0.0, a, 1.0);
        assert!((s.m[1] - a * a).abs() < 1e-15);
        assert!((s.m[2] + a.powi(4) / 3.0).abs() < 1e-15);
        assert!((s.m[3] - 2.0 * a.powi(6) / 45.0).abs() < 1e-15);
        assert!((s.m[4] + a.powi(8) / 315.0).abs() < 1e-16);
        assert!((s.m[5] - 2.0 * a.powi(10) / 14175.0).abs() < 1e-17);
        let x: f64 = 0.3;
        assert!((s.m_series().eval(x) - (a * x).sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn cylinder_rates() {
        let r = series_rhs(&SeriesState::cylinder(0.2, 1.0)).unwrap();
        assert_eq!(r.m[0], -2.0);
        assert!(r.m[1..].iter().all(|&c| c == 0.0));
        assert!(r.h.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn neck_leading_rate() {
        let mut s = SeriesState::cylinder(0.1, 1.0);
        s.m[1] = 0.4;
        let r = series_rhs(&s).unwrap();
        assert!((r.m[0] - (2.0 * 0.4 - 2.0)).abs() < 1e-15);
        assert!((r.h[0] - 4.0 * 0.4 / 0.1).abs() < 1e-12);
    }

    #[test]
    fn pinched_state_is_rejected() {
        let s = SeriesState::cylinder(0.0, 1.0);
        assert!(matches!(series_rhs(&s), Err(Error::Pinched { .. })));
    }

    #[test]
    fn cylinder_pinches_linearly() {
        let cfg = SeriesFlowConfig {
            sample_times: vec![0.01, 0.02],
            ..SeriesFlowConfig::default()
        };
        let traj = series_flow(&SeriesState::cylinder(0.05, 1.0), &cfg).unwrap();
        assert_eq!(traj.status, FlowStatus::Pinched);
        let req: Vec<_> = traj.requested().collect();
        assert_eq!(req.len(), 2);
        assert_eq!(req[0].t, 0.01);
        assert!((req[0].state.m0() - 0.03).abs() < 1e-12);
        assert!((traj.extrapolated_pinch_time() - 0.025).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SeriesFlowConfig {
            stop_m0: 0.0,
            ..SeriesFlowConfig::default()
        };
        assert!(series_flow(&SeriesState::example_neck(), &cfg).is_err());
    }
}
