//! The three-mode family of initial surfaces.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::embeddability_check;
use crate::profile::{MetricProfile, ProfileKind};

/// Node count of the grid used to decide admissibility.
pub const PROBE_NODES: usize = 512;

/// Allowed excess of the embeddability ratio over 1.
pub const TOL_EMBED: f64 = 1e-6;

/// Coefficients of `sin 3ρ` and `sin 5ρ` in the initial `√m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeParams {
    pub c3: f64,
    pub c5: f64,
}

impl ShapeParams {
    pub const ROUND: ShapeParams = ShapeParams { c3: 0.0, c5: 0.0 };
    pub const DUMBBELL: ShapeParams = ShapeParams {
        c3: 0.766,
        c5: -0.091,
    };
    pub const PEANUT: ShapeParams = ShapeParams {
        c3: 0.021,
        c5: 0.598,
    };

    pub fn new(c3: f64, c5: f64) -> Self {
        Self { c3, c5 }
    }

    fn norm(&self) -> f64 {
        1.0 + 3.0 * self.c3 + 5.0 * self.c5
    }

    /// Normalized `√m` at `ρ`.
    pub fn radius(&self, rho: f64) -> f64 {
        ((rho).sin() + self.c3 * (3.0 * rho).sin() + self.c5 * (5.0 * rho).sin()) / self.norm()
    }

    /// Exact `∂√m/∂ρ`.
    pub fn radius_slope(&self, rho: f64) -> f64 {
        (rho.cos() + 3.0 * self.c3 * (3.0 * rho).cos() + 5.0 * self.c5 * (5.0 * rho).cos())
            / self.norm()
    }

    /// Ok if the surface exists and is embeddable; otherwise the first
    /// violated condition.
    pub fn check(&self) -> Result<()> {
        let reject = |reason: String| Error::InadmissibleShape {
            c3: self.c3,
            c5: self.c5,
            reason,
        };
        if !(self.c3.is_finite() && self.c5.is_finite()) {
            return Err(reject("parameters must be finite".into()));
        }
        if !(self.norm().abs() > 1e-12) {
            return Err(reject("normalization 1 + 3c3 + 5c5 vanishes".into()));
        }
        let p = sample(self, PROBE_NODES);
        let n = p.n();
        if let Some(i) = (1..n - 1).find(|&i| !(p.m[i] > 0.0) || self.radius(p.rho[i]) <= 0.0) {
            return Err(reject(format!(
                "sqrt(m) is not positive at rho = {:.4}",
                p.rho[i]
            )));
        }
        let e = embeddability_check(&p)?;
        if !e.embeddable {
            return Err(reject(format!(
                "embeddability fails: |d sqrt(m)/d rho| / sqrt(h) = {:.4} at rho = {:.4} exceeds 1",
                e.max_ratio, e.argmax_rho
            )));
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check().is_ok()
    }

    /// The admissible point closest to `target` along the segment from
    /// `self`, and whether clamping happened. A shape dragged past the
    /// boundary stops at the boundary.
    ///
    /// If `self` is not admissible the segment starts at the round sphere.
    pub fn clamp_toward(&self, target: ShapeParams) -> (ShapeParams, bool) {
        if target.is_admissible() {
            return (target, false);
        }
        let from = if self.is_admissible() {
            *self
        } else {
            ShapeParams::ROUND
        };
        let at = |s: f64| ShapeParams {
            c3: from.c3 + s * (target.c3 - from.c3),
            c5: from.c5 + s * (target.c5 - from.c5),
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..48 {
            let mid = 0.5 * (lo + hi);
            if at(mid).is_admissible() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (at(lo), true)
    }
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self::ROUND
    }
}

fn sample(params: &ShapeParams, n: usize) -> MetricProfile {
    let rho = MetricProfile::uniform_grid(n, PI);
    let mut m: Vec<f64> = rho.iter().map(|&r| params.radius(r).powi(2)).collect();
    m[0] = 0.0;
    m[n - 1] = 0.0;
    MetricProfile {
        kind: ProfileKind::Surface2d,
        rho,
        h: vec![1.0; n],
        m,
        k2: 0.0,
        t: 0.0,
        status: crate::profile::FlowStatus::Ok,
    }
}

/// Samples the family member on `n` uniform nodes of `[0, π]` with `h ≡ 1`.
pub fn make_initial_surface(params: ShapeParams, n: usize) -> Result<MetricProfile> {
    if n < 32 || n % 2 != 0 {
        return Err(Error::InvalidGrid(format!(
            "surface grids need an even node count of at least 32, got {n}"
        )));
    }
    params.check()?;
    Ok(sample(&params, n))
}
