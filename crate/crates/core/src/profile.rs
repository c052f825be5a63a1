//! The sampled metric that flows.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// `h dρ² + m dθ²` on the 2-sphere, ρ ∈ [0, π].
    Surface2d,
    /// `h dρ² + m (dθ² + cos²(√K₂ θ) dφ²)` on ρ ∈ [0, ρ_max].
    Manifold3d,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileKind::Surface2d => "surface2d",
            ProfileKind::Manifold3d => "manifold3d",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowStatus {
    Ok,
    Unstable,
    Pinched,
}

impl FlowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FlowStatus::Ok => "ok",
            FlowStatus::Unstable => "unstable",
            FlowStatus::Pinched => "pinched",
        }
    }
}

impl fmt::Display for FlowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Metric components `h = g₁₁` and `m = g₂₂` sampled on a uniform ρ-grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricProfile {
    pub kind: ProfileKind,
    pub rho: Vec<f64>,
    pub h: Vec<f64>,
    pub m: Vec<f64>,
    /// Curvature of the orbit surface. Ignored for surfaces.
    pub k2: f64,
    pub t: f64,
    pub status: FlowStatus,
}

impl MetricProfile {
    /// Uniform grid of `n` nodes on `[0, rho_max]`.
    pub fn uniform_grid(n: usize, rho_max: f64) -> Vec<f64> {
        let step = rho_max / (n - 1) as f64;
        (0..n)
            .map(|i| if i == n - 1 { rho_max } else { i as f64 * step })
            .collect()
    }

    pub fn new(
        kind: ProfileKind,
        rho: Vec<f64>,
        h: Vec<f64>,
        m: Vec<f64>,
        k2: f64,
    ) -> Result<Self> {
        let p = Self {
            kind,
            rho,
            h,
            m,
            k2,
            t: 0.0,
            status: FlowStatus::Ok,
        };
        p.validate_shape()?;
        Ok(p)
    }

    /// Checks array lengths and grid monotonicity.
    pub fn validate_shape(&self) -> Result<()> {
        let n = self.rho.len();
        if n < 5 {
            return Err(Error::InvalidGrid(format!("{n} nodes is too few")));
        }
        if self.h.len() != n || self.m.len() != n {
            return Err(Error::InvalidGrid(format!(
                "array lengths differ: rho {n}, h {}, m {}",
                self.h.len(),
                self.m.len()
            )));
        }
        if self.rho.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("rho is not strictly increasing".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.rho.len()
    }

    /// Grid spacing; the grid is uniform by construction.
    pub fn step(&self) -> f64 {
        (self.rho[self.n() - 1] - self.rho[0]) / (self.n() - 1) as f64
    }

    pub fn rho_max(&self) -> f64 {
        self.rho[self.n() - 1]
    }

    pub fn is_ok(&self) -> bool {
        self.status == FlowStatus::Ok
    }

    pub(crate) fn expect_kind(&self, expected: ProfileKind) -> Result<()> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(Error::WrongKind {
                expected,
                found: self.kind,
            })
        }
    }

    pub(crate) fn expect_ok(&self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::NotFlowable(self.status.to_string()))
        }
    }

    /// `√m`, with negative values clamped to zero.
    pub fn radius(&self) -> Vec<f64> {
        self.m.iter().map(|&m| m.max(0.0).sqrt()).collect()
    }

    /// Smallest value of `m` away from the end nodes.
    pub fn min_interior_m(&self) -> f64 {
        self.m[1..self.n() - 1]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest deviation from reflection symmetry about the domain midpoint.
    pub fn mirror_asymmetry(&self) -> f64 {
        let n = self.n();
        (0..n / 2)
            .map(|i| {
                let j = n - 1 - i;
                (self.h[i] - self.h[j]).abs().max((self.m[i] - self.m[j]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Copies the lower half of `h` and `m` onto the upper half.
    pub(crate) fn mirror_lower_half(&mut self) {
        mirror_lower_half(&mut self.h);
        mirror_lower_half(&mut self.m);
    }
}

pub(crate) fn mirror_lower_half(v: &mut [f64]) {
    let n = v.len();
    for i in 0..n / 2 {
        v[n - 1 - i] = v[i];
    }
}
