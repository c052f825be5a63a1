//! Ricci flow of SO(3)-invariant 3-manifolds near a neck pinch.

mod fd;
mod rhs;
mod series_flow;

pub use fd::{
    fd_flow_3d, neck_initial_profile, FdConfig, FdSnapshot, DEFAULT_FD_NODES, NECK_RHO_MAX,
    LARGE_STEP_SCHEDULE,
};
pub use rhs::{
    curvatures_3d, curvatures_at, dh_dt, dm_dt, ricci_flow_rhs_3d, CurvatureReport, FlowRates,
    NeckCurvature,
};
pub use series_flow::{
    series_flow, series_rhs, series_rhs_full, SeriesFlowConfig, SeriesRates, SeriesSample,
    SeriesState, SeriesTrajectory, EVEN_LEN, FIT_SAMPLE_TIMES, REFERENCE_PINCH_TIME,
};
