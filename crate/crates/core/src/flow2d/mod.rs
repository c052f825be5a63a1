//! Explicit Ricci flow of surfaces of revolution, stabilized by spectral
//! filtering and arc-length reparametrization.

mod filter;
mod pipeline;
mod reparam;
mod ricci;

pub use filter::{pole_factor, spectral_coefficients, spectral_filter, SpectralCoefficients};
pub use pipeline::{
    flow_surface, Diagnostics, Flow2DConfig, StepOutcome, SurfaceFlow, DEFAULT_SURFACE_NODES,
};
pub use reparam::reparametrize_arclength;
pub use ricci::{euler_step_2d, ricci_tensor_2d, Ricci2d};
