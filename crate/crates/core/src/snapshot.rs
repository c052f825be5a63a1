//! JSON snapshot files.
//!
//! Floats are written in the shortest decimal form that parses back to the
//! same binary value, so a round trip is bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow2d::Diagnostics;
use crate::geometry::{area, embeddability_check, total_curvature};
use crate::profile::{FlowStatus, MetricProfile, ProfileKind};

pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotDiagnostics {
    /// Surfaces only.
    pub area: Option<f64>,
    /// Surfaces only.
    pub total_curvature: Option<f64>,
    pub max_ratio: f64,
    pub min_m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub version: u32,
    pub kind: ProfileKind,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<f64>,
    pub rho: Vec<f64>,
    pub h: Vec<f64>,
    pub m: Vec<f64>,
    pub status: FlowStatus,
    pub diagnostics: SnapshotDiagnostics,
}

impl SnapshotDiagnostics {
    pub fn of(p: &MetricProfile) -> Result<Self> {
        let surface = p.kind == ProfileKind::Surface2d;
        Ok(Self {
            area: if surface { Some(area(p)?) } else { None },
            total_curvature: if surface { Some(total_curvature(p)?) } else { None },
            max_ratio: embeddability_check(p)?.max_ratio,
            min_m: p.min_interior_m(),
        })
    }
}

impl From<Diagnostics> for SnapshotDiagnostics {
    fn from(d: Diagnostics) -> Self {
        Self {
            area: Some(d.area),
            total_curvature: Some(d.total_curvature),
            max_ratio: d.max_ratio,
            min_m: d.min_m,
        }
    }
}

impl Snapshot {
    pub fn of(p: &MetricProfile) -> Result<Self> {
        Ok(Self {
            version: SNAPSHOT_VERSION,
            kind: p.kind,
            t: p.t,
            k2: (p.kind == ProfileKind::Manifold3d).then_some(p.k2),
            rho: p.rho.clone(),
            h: p.h.clone(),
            m: p.m.clone(),
            status: p.status,
            diagnostics: SnapshotDiagnostics::of(p)?,
        })
    }

    /// Rebuilds the profile, checking version and array shapes.
    pub fn to_profile(&self) -> Result<MetricProfile> {
        if self.version != SNAPSHOT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported version {} (expected {SNAPSHOT_VERSION})",
                self.version
            )));
        }
        let k2 = match (self.kind, self.k2) {
            (ProfileKind::Manifold3d, None) => {
                return Err(Error::Snapshot("manifold3d snapshot without k2".into()))
            }
            (_, k2) => k2.unwrap_or(0.0),
        };
        let mut p = MetricProfile::new(self.kind, self.rho.clone(), self.h.clone(), self.m.clone(), k2)
            .map_err(|e| Error::Snapshot(e.to_string()))?;
        p.t = self.t;
        p.status = self.status;
        Ok(p)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Snapshot(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{make_initial_surface, ShapeParams};

    #[test]
    fn surface_round_trip_is_exact() {
        let mut p = make_initial_surface(ShapeParams::DUMBBELL, 64).unwrap();
        p.t = 0.1 + 0.2;
        let s = Snapshot::of(&p).unwrap();
        let back = Snapshot::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
        let q = back.to_profile().unwrap();
        for (a, b) in p.m.iter().zip(&q.m) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(q.t.to_bits(), p.t.to_bits());
        assert!(s.k2.is_none());
    }

    #[test]
    fn manifold_needs_k2() {
        let p = crate::flow3d::neck_initial_profile(32).unwrap();
        let mut s = Snapshot::of(&p).unwrap();
        assert_eq!(s.k2, Some(1.0));
        assert!(s.diagnostics.area.is_none());
        s.k2 = None;
        assert!(s.to_profile().is_err());
    }

    #[test]
    fn rejects_bad_version_and_lengths() {
        let p = make_initial_surface(ShapeParams::ROUND, 32).unwrap();
        let mut s = Snapshot::of(&p).unwrap();
        s.version = 99;
        assert!(s.to_profile().is_err());
        s.version = SNAPSHOT_VERSION;
        s.h.pop();
        assert!(matches!(s.to_profile(), Err(Error::Snapshot(_))));
        assert!(Snapshot::from_json("{\"version\": 1}").is_err());
    }
}
