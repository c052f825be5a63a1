//! Traces the reparametrized h of the (0.021, 0.598) surface at dt = 0.002:
//! a short rise followed by steady decay.
//!
//! cargo run --release -p ricci-rev --example h_sequence

use ricci_rev::flow2d::{Flow2DConfig, StepOutcome, SurfaceFlow};
use ricci_rev::{make_initial_surface, ShapeParams};

fn main() -> ricci_rev::Result<()> {
    let p = make_initial_surface(ShapeParams::PEANUT, 512)?;
    let mut flow = SurfaceFlow::new(p, Flow2DConfig::with_dt(2e-3))?;
    let mut h = vec![flow.diagnostics()?.h_const];
    while let StepOutcome::Advanced(d) = flow.step()? {
        h.push(d.h_const);
    }
    println!("{} steps before the flow halted", h.len() - 1);
    let frames: Vec<String> = h.iter().step_by(4).map(|v| format!("{v:.6}")).collect();
    println!("every 4th step: {}", frames.join(", "));
    Ok(())
}
