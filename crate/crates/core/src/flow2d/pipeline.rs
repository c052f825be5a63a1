use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow2d::{euler_step_2d, reparametrize_arclength, spectral_filter};
use crate::geometry::{area, embeddability_check, total_curvature};
use crate::profile::{FlowStatus, MetricProfile, ProfileKind};
use crate::shape::TOL_EMBED;
use crate::stencil::trapezoid;

/// Node count used for surfaces unless a caller picks another.
pub const DEFAULT_SURFACE_NODES: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Flow2DConfig {
    /// Time step; negative values flow backward.
    pub dt: f64,
    pub filter_every: usize,
    pub reparam_every: usize,
    /// Highest retained `cos 2iρ` mode of `h`.
    pub n_h: usize,
    /// Highest retained `sin (2i+1)ρ` mode of `√m`.
    pub n_m: usize,
    pub k_pole: f64,
    pub tol_embed: f64,
    /// Largest one-step departure of the area from `A − 8π dt`, relative to `A`.
    pub max_area_jump: f64,
    pub max_steps: usize,
}

impl Default for Flow2DConfig {
    fn default() -> Self {
        Self {
            dt: 2e-3,
            filter_every: 1,
            reparam_every: 1,
            n_h: 5,
            n_m: 5,
            k_pole: 100.0,
            tol_embed: TOL_EMBED,
            max_area_jump: 0.05,
            max_steps: 1_000_000,
        }
    }
}

impl Flow2DConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self {
            dt,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !self.dt.is_finite() || self.dt == 0.0 {
            return bad(format!("dt = {} must be finite and nonzero", self.dt));
        }
        if self.filter_every == 0 || self.reparam_every == 0 {
            return bad("filter_every and reparam_every must be at least 1".into());
        }
        if !(self.k_pole > 0.0) {
            return bad(format!("k_pole = {} must be positive", self.k_pole));
        }
        if !(self.tol_embed >= 0.0) || !(self.max_area_jump > 0.0) {
            return bad("tolerances must be nonnegative".into());
        }
        Ok(())
    }
}

/// Per-snapshot diagnostics of a surface flow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    /// `(∫√h dρ / π)²`, which is `h` itself once reparametrized.
    pub h_const: f64,
    pub area: f64,
    pub total_curvature: f64,
    pub max_ratio: f64,
    pub min_m: f64,
}

impl Diagnostics {
    pub fn of(p: &MetricProfile) -> Result<Self> {
        let root_h: Vec<f64> = p.h.iter().map(|h| h.max(0.0).sqrt()).collect();
        let l = trapezoid(&root_h, p.step()) / std::f64::consts::PI;
        Ok(Self {
            t: p.t,
            h_const: l * l,
            area: area(p)?,
            total_curvature: total_curvature(p)?,
            max_ratio: embeddability_check(p)?.max_ratio,
            min_m: p.min_interior_m(),
        })
    }
}

/// Stepwise surface flow that halts itself on instability.
///
/// Each step is an Euler step, then the spectral filter and the arc-length
/// reparametrization at their configured cadence. A step that produces a
/// non-finite value, `√m ≤ 0` inside, an embeddability ratio above
/// `1 + tol_embed` or an unexpected area jump above `max_area_jump` is discarded; the
/// last good state is kept with status [`FlowStatus::Unstable`].
#[derive(Clone, Debug)]
pub struct SurfaceFlow {
    profile: MetricProfile,
    cfg: Flow2DConfig,
    steps: usize,
    area: f64,
    mirror: bool,
    halt_reason: Option<String>,
}

/// Result of one attempted step.
#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    Advanced(Diagnostics),
    Halted(String),
}

impl SurfaceFlow {
    pub fn new(p: MetricProfile, cfg: Flow2DConfig) -> Result<Self> {
        p.expect_kind(ProfileKind::Surface2d)?;
        p.expect_ok()?;
        cfg.validate()?;
        let scale = p.m.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
        // Families symmetric about ρ = π/2 are computed on the lower half.
        let mirror = p.mirror_asymmetry() <= 1e-12 * scale;
        let area = area(&p)?;
        Ok(Self {
            profile: p,
            cfg,
            steps: 0,
            area,
            mirror,
            halt_reason: None,
        })
    }

    pub fn profile(&self) -> &MetricProfile {
        &self.profile
    }

    pub fn into_profile(self) -> MetricProfile {
        self.profile
    }

    pub fn config(&self) -> &Flow2DConfig {
        &self.cfg
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn halt_reason(&self) -> Option<&str> {
        self.halt_reason.as_deref()
    }

    pub fn diagnostics(&self) -> Result<Diagnostics> {
        Diagnostics::of(&self.profile)
    }

    /// Flips the direction of time.
    pub fn set_dt(&mut self, dt: f64) -> Result<()> {
        let cfg = Flow2DConfig { dt, ..self.cfg.clone() };
        cfg.validate()?;
        self.cfg = cfg;
        Ok(())
    }

    pub fn step(&mut self) -> Result<StepOutcome> {
        if let Some(reason) = &self.halt_reason {
            return Ok(StepOutcome::Halted(reason.clone()));
        }
        if self.steps >= self.cfg.max_steps {
            return Err(Error::InvalidConfig(format!(
                "step cap of {} reached",
                self.cfg.max_steps
            )));
        }
        match self.advance()? {
            Ok(next) => {
                let diag = Diagnostics::of(&next)?;
                self.area = diag.area;
                self.profile = next;
                self.steps += 1;
                Ok(StepOutcome::Advanced(diag))
            }
            Err(reason) => {
                self.profile.status = FlowStatus::Unstable;
                self.halt_reason = Some(reason.clone());
                Ok(StepOutcome::Halted(reason))
            }
        }
    }

    /// The next state, or why it was rejected.
    fn advance(&self) -> Result<std::result::Result<MetricProfile, String>> {
        let cfg = &self.cfg;
        let k = self.steps + 1;
        let mut next = euler_step_2d(&self.profile, cfg.dt)?;
        if !next.is_ok() {
            return Ok(Err("non-finite values after the Euler step".into()));
        }
        if next.h.iter().any(|&h| !(h > 0.0)) {
            return Ok(Err("h is not positive".into()));
        }
        if k % cfg.filter_every == 0 {
            next = spectral_filter(&next, cfg.n_h, cfg.n_m, cfg.k_pole)?;
            if !next.is_ok() {
                return Ok(Err("filtered sqrt(m) lost positivity".into()));
            }
        }
        if k % cfg.reparam_every == 0 {
            next = reparametrize_arclength(&next)?;
        }
        if self.mirror {
            next.mirror_lower_half();
        }
        if next.h.iter().chain(&next.m).any(|v| !v.is_finite()) {
            return Ok(Err("non-finite values".into()));
        }
        let min_m = next.min_interior_m();
        if !(min_m > 0.0) {
            return Ok(Err(format!("interior m = {min_m}")));
        }
        let e = embeddability_check(&next)?;
        if e.max_ratio > 1.0 + cfg.tol_embed {
            return Ok(Err(format!(
                "embeddability ratio {:.8} at rho = {:.4}",
                e.max_ratio, e.argmax_rho
            )));
        }
        // Gauss–Bonnet fixes dA/dt = −8π; only the departure from it counts.
        let a = area(&next)?;
        let expected = self.area - 8.0 * std::f64::consts::PI * cfg.dt;
        if !((a - expected).abs() <= cfg.max_area_jump * self.area.abs()) {
            return Ok(Err(format!(
                "area jumped from {} to {a} (expected {expected})",
                self.area
            )));
        }
        Ok(Ok(next))
    }
}

/// Runs up to `steps` steps and returns the final profile with the
/// diagnostics of the initial and every accepted state.
pub fn flow_surface(
    p: &MetricProfile,
    cfg: &Flow2DConfig,
    steps: usize,
) -> Result<(MetricProfile, Vec<Diagnostics>)> {
    if steps > cfg.max_steps {
        return Err(Error::InvalidConfig(format!(
            "{steps} steps exceeds the cap of {}",
            cfg.max_steps
        )));
    }
    let mut flow = SurfaceFlow::new(p.clone(), cfg.clone())?;
    let mut diags = vec![flow.diagnostics()?];
    for _ in 0..steps {
        match flow.step()? {
            StepOutcome::Advanced(d) => diags.push(d),
            StepOutcome::Halted(_) => break,
        }
    }
    Ok((flow.into_profile(), diags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{make_initial_surface, ShapeParams};

    #[test]
    fn round_sphere_shrinks_linearly() {
        let p = make_initial_surface(ShapeParams::ROUND, 128).unwrap();
        let (q, diags) = flow_surface(&p, &Flow2DConfig::with_dt(1e-3), 100).unwrap();
        assert!(q.is_ok());
        assert_eq!(diags.len(), 101);
        for d in &diags {
            assert!((d.h_const - (1.0 - 2.0 * d.t)).abs() < 1e-3);
        }
    }

    #[test]
    fn backward_flow_halts() {
        let p = make_initial_surface(ShapeParams::DUMBBELL, 256).unwrap();
        let (q, diags) = flow_surface(&p, &Flow2DConfig::with_dt(-2e-3), 200).unwrap();
        assert_eq!(q.status, FlowStatus::Unstable);
        assert!(diags.len() < 200);
    }

    #[test]
    fn halted_flow_refuses_more_steps() {
        let p = make_initial_surface(ShapeParams::DUMBBELL, 256).unwrap();
        let mut f = SurfaceFlow::new(p, Flow2DConfig::with_dt(-2e-3)).unwrap();
        while let StepOutcome::Advanced(_) = f.step().unwrap() {}
        let t = f.profile().t;
        assert!(matches!(f.step().unwrap(), StepOutcome::Halted(_)));
        assert_eq!(f.profile().t, t);
    }

    #[test]
    fn bad_config_rejected() {
        let p = make_initial_surface(ShapeParams::ROUND, 64).unwrap();
        for cfg in [
            Flow2DConfig::with_dt(0.0),
            Flow2DConfig {
                filter_every: 0,
                ..Default::default()
            },
            Flow2DConfig {
                k_pole: -1.0,
                ..Default::default()
            },
        ] {
            assert!(SurfaceFlow::new(p.clone(), cfg).is_err());
        }
    }
}
