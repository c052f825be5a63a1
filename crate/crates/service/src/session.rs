//! Interactive surface sessions: pick a shape, then flow it.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use ricci_rev::flow2d::{Flow2DConfig, StepOutcome, SurfaceFlow, DEFAULT_SURFACE_NODES};
use ricci_rev::snapshot::Snapshot;
use ricci_rev::{make_initial_surface, FlowStatus, MetricProfile, ShapeParams};

use crate::error::{Result, ServiceError};

pub const DEFAULT_HISTORY: usize = 512;

/// Largest step count accepted in one request.
pub const MAX_STEPS_PER_REQUEST: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Shape,
    Flow,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Shape => "shape",
            Mode::Flow => "flow",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

/// Outcome of a step request.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub snapshot: Snapshot,
    pub status: FlowStatus,
    pub steps_taken: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halt_reason: Option<String>,
}

/// Outcome of a shape update.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub params: ShapeParams,
    /// True when the request was outside the admissible region and the
    /// shape stopped at its boundary.
    pub clamped: bool,
    pub snapshot: Snapshot,
}

#[derive(Debug)]
pub struct Session {
    pub id: String,
    mode: Mode,
    params: ShapeParams,
    grid: usize,
    cfg: Flow2DConfig,
    flow: SurfaceFlow,
    history: VecDeque<Snapshot>,
    history_cap: usize,
}

impl Session {
    pub fn new(
        id: String,
        params: ShapeParams,
        grid: Option<usize>,
        cfg: Flow2DConfig,
        history_cap: usize,
    ) -> Result<Self> {
        let grid = grid.unwrap_or(DEFAULT_SURFACE_NODES);
        let profile = make_initial_surface(params, grid)?;
        let flow = SurfaceFlow::new(profile, cfg.clone())?;
        let mut s = Self {
            id,
            mode: Mode::Shape,
            params,
            grid,
            cfg,
            flow,
            history: VecDeque::new(),
            history_cap: history_cap.max(1),
        };
        s.record()?;
        Ok(s)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn params(&self) -> ShapeParams {
        self.params
    }

    pub fn profile(&self) -> &MetricProfile {
        self.flow.profile()
    }

    pub fn snapshot(&self) -> Result<Snapshot> {
        Ok(Snapshot::of(self.profile())?)
    }

    pub fn history(&self) -> &VecDeque<Snapshot> {
        &self.history
    }

    fn record(&mut self) -> Result<()> {
        if self.history.len() == self.history_cap {
            self.history.pop_front();
        }
        self.history.push_back(self.snapshot()?);
        Ok(())
    }

    fn reset_flow(&mut self) -> Result<()> {
        let profile = make_initial_surface(self.params, self.grid)?;
        self.flow = SurfaceFlow::new(profile, self.cfg.clone())?;
        self.history.clear();
        self.record()
    }

    fn require(&self, mode: Mode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(ServiceError::WrongMode {
                expected: mode,
                found: self.mode,
            })
        }
    }

    /// Moves the shape toward `target`, stopping at the admissible boundary.
    pub fn set_shape(&mut self, target: ShapeParams) -> Result<ShapeReport> {
        self.require(Mode::Shape)?;
        let (params, clamped) = self.params.clamp_toward(target);
        self.params = params;
        self.reset_flow()?;
        Ok(ShapeReport {
            params,
            clamped,
            snapshot: self.snapshot()?,
        })
    }

    /// Shape to flow keeps the current surface; flow to shape restarts
    /// from the initial surface of the current parameters.
    pub fn set_mode(&mut self, mode: Mode) -> Result<()> {
        if mode == self.mode {
            return Ok(());
        }
        if mode == Mode::Shape {
            self.reset_flow()?;
        }
        self.mode = mode;
        Ok(())
    }

    pub fn step(&mut self, count: usize, direction: Direction) -> Result<StepReport> {
        self.require(Mode::Flow)?;
        if count == 0 || count > MAX_STEPS_PER_REQUEST {
            return Err(ServiceError::BadRequest(format!(
                "count must be in 1..={MAX_STEPS_PER_REQUEST}, got {count}"
            )));
        }
        if let Some(reason) = self.flow.halt_reason() {
            return Err(ServiceError::Halted(reason.to_string()));
        }
        let dt = match direction {
            Direction::Forward => self.cfg.dt.abs(),
            Direction::Backward => -self.cfg.dt.abs(),
        };
        self.flow.set_dt(dt)?;
        let mut taken = 0;
        let mut halt_reason = None;
        for _ in 0..count {
            match self.flow.step()? {
                StepOutcome::Advanced(_) => {
                    taken += 1;
                    self.record()?;
                }
                StepOutcome::Halted(reason) => {
                    halt_reason = Some(reason);
                    break;
                }
            }
        }
        Ok(StepReport {
            snapshot: self.snapshot()?,
            status: self.profile().status,
            steps_taken: taken,
            halt_reason,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(params: ShapeParams) -> Session {
        Session::new("s".into(), params, Some(128), Flow2DConfig::with_dt(1e-3), 4).unwrap()
    }

    #[test]
    fn round_sphere_steps() {
        let mut s = session(ShapeParams::ROUND);
        assert!(matches!(s.step(1, Direction::Forward), Err(ServiceError::WrongMode { .. })));
        s.set_mode(Mode::Flow).unwrap();
        let r = s.step(10, Direction::Forward).unwrap();
        assert_eq!(r.steps_taken, 10);
        assert!((r.snapshot.h[5] - 0.98).abs() < 1e-3);
        assert_eq!(s.history().len(), 4);
    }

    #[test]
    fn shape_updates_only_in_shape_mode() {
        let mut s = session(ShapeParams::ROUND);
        let r = s.set_shape(ShapeParams::DUMBBELL).unwrap();
        assert!(!r.clamped);
        s.set_mode(Mode::Flow).unwrap();
        assert!(s.set_shape(ShapeParams::ROUND).is_err());
        s.step(3, Direction::Forward).unwrap();
        s.set_mode(Mode::Shape).unwrap();
        assert_eq!(s.profile().t, 0.0);
        assert_eq!(s.params(), ShapeParams::DUMBBELL);
    }

    #[test]
    fn clamps_past_boundary() {
        let mut s = session(ShapeParams::ROUND);
        let r = s.set_shape(ShapeParams::new(-0.5, 0.0)).unwrap();
        assert!(r.clamped);
        assert!(r.params.c3 > -0.5 && r.params.c3 < 0.0);
        // Dragging further keeps the shape where it is.
        let again = s.set_shape(ShapeParams::new(-0.6, 0.0)).unwrap();
        assert!(again.clamped);
        assert!((again.params.c3 - r.params.c3).abs() < 1e-9);
    }

    #[test]
    fn step_count_is_bounded() {
        let mut s = session(ShapeParams::ROUND);
        s.set_mode(Mode::Flow).unwrap();
        assert!(s.step(0, Direction::Forward).is_err());
        assert!(s.step(MAX_STEPS_PER_REQUEST + 1, Direction::Forward).is_err());
    }
}
