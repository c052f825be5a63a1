//! Integrates the neck power series until it pinches and prints the
//! neck quantities at the sample times.
//!
//! cargo run --release -p ricci-rev --example neck_series [eta]

use ricci_rev::flow3d::{series_flow, SeriesFlowConfig, SeriesState};

fn main() -> ricci_rev::Result<()> {
    let mut cfg = SeriesFlowConfig::reference();
    if let Some(eta) = std::env::args().nth(1) {
        cfg.eta = eta.parse().expect("eta");
    }
    let traj = series_flow(&SeriesState::example_neck(), &cfg)?;
    println!("{:>14} {:>12} {:>10} {:>12} {:>12} {:>12}", "t", "m0", "h0", "R", "Kab", "Kbc");
    for s in traj.requested() {
        println!(
            "{:>14.9e} {:>12.5e} {:>10.5} {:>12.5e} {:>12.5e} {:>12.5e}",
            s.t,
            s.state.m0(),
            s.state.h0(),
            s.curvature.scalar,
            s.curvature.k_ab,
            s.curvature.k_bc
        );
    }
    println!(
        "{} steps, status {}, extrapolated pinch time {:.10e}",
        traj.steps,
        traj.status,
        traj.extrapolated_pinch_time()
    );
    Ok(())
}
