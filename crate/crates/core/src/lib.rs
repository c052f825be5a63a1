//! Ricci flow of metrics of revolution.
//!
//! Surfaces `h dρ² + m dθ²` on the 2-sphere flow explicitly with spectral
//! filtering ([`flow2d`]); SO(3)-invariant 3-manifolds near a neck flow by
//! finite differences or truncated power series ([`flow3d`]), and the neck
//! data can be fitted to power laws ([`fit`]).

pub mod error;
pub mod fit;
pub mod flow2d;
pub mod flow3d;
pub mod geometry;
pub mod interp;
pub mod mesh;
pub mod profile;
pub mod series;
pub mod shape;
pub mod snapshot;
pub mod stencil;

pub use error::{Error, Result};
pub use profile::{FlowStatus, MetricProfile, ProfileKind};
pub use shape::{make_initial_surface, ShapeParams};
