//! Large-step finite differences through the reference schedule, then a
//! fine-step run compared with the series solver early on.
//!
//! cargo run --release -p ricci-rev --example fd_neck

use ricci_rev::flow3d::{
    fd_flow_3d, neck_initial_profile, series_flow, FdConfig, SeriesFlowConfig, SeriesState,
    LARGE_STEP_SCHEDULE,
};

fn main() -> ricci_rev::Result<()> {
    let p = neck_initial_profile(512)?;
    let coarse = fd_flow_3d(&p, &LARGE_STEP_SCHEDULE, &FdConfig::default())?;
    println!("large steps (qualitative):");
    for s in &coarse {
        let flagged = s.non_geometric.iter().filter(|&&b| b).count();
        println!(
            "  t {:.9e}  m(0) {:>12.5e}  h(0) {:>8.4}  {}  non-geometric nodes {flagged}",
            s.profile.t, s.profile.m[0], s.profile.h[0], s.profile.status
        );
    }

    let times = [2e-6, 5e-6, 1e-5];
    let fine = fd_flow_3d(
        &p,
        &[0.0, times[0], times[1], times[2]],
        &FdConfig {
            max_substep: Some(1e-8),
            continue_after_pinch: false,
        },
    )?;
    let cfg = SeriesFlowConfig {
        eta: 1e-5,
        sample_times: times.to_vec(),
        ..SeriesFlowConfig::default()
    };
    let series = series_flow(&SeriesState::example_neck(), &cfg)?;
    println!("fine steps against the series solver:");
    for (s, f) in series.requested().zip(&fine[1..]) {
        let rel = (f.profile.m[0] - s.state.m0()).abs() / s.state.m0();
        println!("  t {:.0e}  fd {:.8e}  series {:.8e}  rel {rel:.2e}", s.t, f.profile.m[0], s.state.m0());
    }
    Ok(())
}
