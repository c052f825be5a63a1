//! Explicit finite-difference integration of the 3-manifold flow.
//!
//! This is the qualitative instrument: it follows large time steps and can
//! step past the pinch. Quantitative neck data come from the series solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow3d::rhs::{rates_unchecked, ricci_flow_rhs_3d};
use crate::profile::{FlowStatus, MetricProfile, ProfileKind};

/// Right end of the default domain: the bulge maximum of `sin²(9πρ/40)`.
pub const NECK_RHO_MAX: f64 = 20.0 / 9.0;

/// Default node count for the finite-difference domain.
pub const DEFAULT_FD_NODES: usize = 512;

/// Target times of the large-step run.
pub const LARGE_STEP_SCHEDULE: [f64; 11] = [
    0.0,
    0.000025,
    0.000050,
    0.0000625,
    0.00006875,
    0.000071875,
    0.000075000,
    0.00007578125,
    0.00007656250,
    0.000076953125,
    0.000077343750,
];

/// `h = 1`, `m = 10⁻⁴ + sin²(9πρ/40)`, `K₂ = 1` on `[0, 20/9]`.
pub fn neck_initial_profile(n: usize) -> Result<MetricProfile> {
    if n < 8 {
        return Err(Error::InvalidGrid(format!("{n} nodes is too few")));
    }
    let a = 9.0 * std::f64::consts::PI / 40.0;
    let rho = MetricProfile::uniform_grid(n, NECK_RHO_MAX);
    let m = rho.iter().map(|r| 1e-4 + (a * r).sin().powi(2)).collect();
    MetricProfile::new(ProfileKind::Manifold3d, rho, vec![1.0; n], m, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Largest Euler step. `None` takes one step per schedule interval.
    pub max_substep: Option<f64>,
    /// Keep integrating after `m` turns negative. The continuation is for
    /// display only.
    pub continue_after_pinch: bool,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            max_substep: None,
            continue_after_pinch: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FdSnapshot {
    pub profile: MetricProfile,
    /// Nodes where `m ≤ 0`; these carry no geometry.
    pub non_geometric: Vec<bool>,
    /// Always true: large explicit steps are not converged.
    pub qualitative: bool,
}

impl FdSnapshot {
    fn of(profile: MetricProfile) -> Self {
        let non_geometric = profile.m.iter().map(|&m| !(m > 0.0)).collect();
        Self {
            profile,
            non_geometric,
            qualitative: true,
        }
    }

    pub fn has_non_geometric(&self) -> bool {
        self.non_geometric.iter().any(|&b| b)
    }
}

fn euler_step(p: &mut MetricProfile, dt: f64, allow_nonpositive: bool) -> Result<()> {
    let rates = if allow_nonpositive {
        rates_unchecked(p)
    } else {
        ricci_flow_rhs_3d(p)?
    };
    for i in 0..p.n() {
        p.h[i] += dt * rates.dh[i];
        p.m[i] += dt * rates.dm[i];
    }
    p.t += dt;
    Ok(())
}

/// Integrates through each target time in `schedule`, returning one
/// snapshot per target.
///
/// Integration stops at the first snapshot where some `m` is nonpositive
/// unless `continue_after_pinch` is set; that snapshot has status
/// [`FlowStatus::Pinched`]. Non-finite values end the run with status
/// [`FlowStatus::Unstable`].
pub fn fd_flow_3d(p: &MetricProfile, schedule: &[f64], cfg: &FdConfig) -> Result<Vec<FdSnapshot>> {
    p.expect_kind(ProfileKind::Manifold3d)?;
    p.expect_ok()?;
    if schedule.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig("schedule must be nondecreasing".into()));
    }
    if schedule.first().is_some_and(|&t| t < p.t) {
        return Err(Error::InvalidConfig(format!(
            "schedule starts at {} before the profile time {}",
            schedule[0], p.t
        )));
    }
    if let Some(h) = cfg.max_substep {
        if !(h > 0.0) {
            return Err(Error::InvalidConfig(format!("max_substep = {h} must be positive")));
        }
    }

    let mut cur = p.clone();
    let mut out = Vec::with_capacity(schedule.len());
    for &target in schedule {
        while cur.t < target {
            let remaining = target - cur.t;
            let pieces = cfg
                .max_substep
                .map_or(1.0, |h| (remaining / h).ceil().max(1.0));
            let dt = remaining / pieces;
            let past_pinch = cur.status == FlowStatus::Pinched;
            match euler_step(&mut cur, dt, past_pinch) {
                Ok(()) => {}
                Err(Error::Pinched { .. }) => {
                    // m reached exactly zero at a node.
                    cur.status = FlowStatus::Pinched;
                    euler_step(&mut cur, dt, true)?;
                }
                Err(e) => return Err(e),
            }
            if (target - cur.t).abs() <= 1e-12 * target.abs() {
                cur.t = target;
            }
            if cur.h.iter().chain(&cur.m).any(|v| !v.is_finite())
                || cur.h.iter().any(|&h| h <= 0.0)
            {
                cur.status = FlowStatus::Unstable;
                out.push(FdSnapshot::of(cur));
                return Ok(out);
            }
            if cur.m.iter().any(|&m| m <= 0.0) {
                cur.status = FlowStatus::Pinched;
                if !cfg.continue_after_pinch {
                    out.push(FdSnapshot::of(cur));
                    return Ok(out);
                }
            }
        }
        out.push(FdSnapshot::of(cur.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_step_returns_initial() {
        let p = neck_initial_profile(64).unwrap();
        let run = fd_flow_3d(&p, &[0.0], &FdConfig::default()).unwrap();
        assert_eq!(run.len(), 1);
        assert_eq!(run[0].profile, p);
        assert!(!run[0].has_non_geometric());
    }

    #[test]
    fn cylinder_single_step() {
        let n = 32;
        let rho = MetricProfile::uniform_grid(n, 1.0);
        let p = MetricProfile::new(ProfileKind::Manifold3d, rho, vec![1.0; n], vec![0.5; n], 1.0)
            .unwrap();
        let run = fd_flow_3d(&p, &[0.1], &FdConfig::default()).unwrap();
        assert!(run[0].profile.m.iter().all(|&m| (m - 0.3).abs() < 1e-15));
        assert_eq!(run[0].profile.t, 0.1);
    }

    #[test]
    fn cylinder_pinch_stops_unless_continued() {
        let n = 16;
        let rho = MetricProfile::uniform_grid(n, 1.0);
        let p = MetricProfile::new(ProfileKind::Manifold3d, rho, vec![1.0; n], vec![0.1; n], 1.0)
            .unwrap();
        let run = fd_flow_3d(&p, &[0.02, 0.06, 0.08], &FdConfig::default()).unwrap();
        assert_eq!(run.len(), 2);
        assert_eq!(run[1].profile.status, FlowStatus::Pinched);
        assert!(run[1].has_non_geometric());
    }

    #[test]
    fn rejects_decreasing_schedule() {
        let p = neck_initial_profile(32).unwrap();
        assert!(fd_flow_3d(&p, &[1e-5, 0.5e-5], &FdConfig::default()).is_err());
    }
}
