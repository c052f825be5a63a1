//! Flows the dumbbell until the flow halts itself and prints the
//! diagnostics every ten steps.
//!
//! cargo run --release -p ricci-rev --example surface_flow [dt]

use std::f64::consts::PI;

use ricci_rev::flow2d::{Flow2DConfig, StepOutcome, SurfaceFlow};
use ricci_rev::{make_initial_surface, ShapeParams};

fn main() -> ricci_rev::Result<()> {
    let dt: f64 = std::env::args().nth(1).map_or(2e-3, |s| s.parse().expect("dt"));
    let mut cfg = Flow2DConfig::with_dt(dt);
    if dt > 5e-3 {
        // Large steps need a gentler pole correction to stay embeddable.
        cfg.k_pole = 30.0;
    }
    let p = make_initial_surface(ShapeParams::DUMBBELL, 512)?;
    let mut flow = SurfaceFlow::new(p, cfg)?;
    let a0 = flow.diagnostics()?.area;
    println!("{:>8} {:>10} {:>10} {:>12} {:>10}", "t", "h", "area", "A0-8pi t", "K total");
    loop {
        match flow.step()? {
            StepOutcome::Advanced(d) => {
                if flow.steps() % 10 == 0 {
                    println!(
                        "{:>8.4} {:>10.6} {:>10.5} {:>12.5} {:>10.6}",
                        d.t,
                        d.h_const,
                        d.area,
                        a0 - 8.0 * PI * d.t,
                        d.total_curvature
                    );
                }
            }
            StepOutcome::Halted(reason) => {
                println!("halted after {} steps at t = {:.4}: {reason}", flow.steps(), flow.profile().t);
                break;
            }
        }
    }
    Ok(())
}
