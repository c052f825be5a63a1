//! Builds the initial surfaces of a few shape parameters and reports
//! admissibility, area and the embeddability margin.
//!
//! cargo run -p ricci-rev --example initial_surface

use ricci_rev::geometry::{area, embeddability_check, total_curvature};
use ricci_rev::{make_initial_surface, ShapeParams};

fn main() -> ricci_rev::Result<()> {
    let shapes = [
        ("round", ShapeParams::ROUND),
        ("dumbbell", ShapeParams::DUMBBELL),
        ("peanut", ShapeParams::PEANUT),
        ("too steep", ShapeParams::new(-0.2, 0.0)),
        ("pinched", ShapeParams::new(-0.5, 0.0)),
    ];
    for (name, params) in shapes {
        match make_initial_surface(params, 512) {
            Ok(p) => {
                let e = embeddability_check(&p)?;
                println!(
                    "{name:>10} {params:?}: area {:.5}, total curvature {:.6}, max ratio {:.4} at rho {:.3}",
                    area(&p)?,
                    total_curvature(&p)?,
                    e.max_ratio,
                    e.argmax_rho
                );
            }
            Err(err) => println!("{name:>10} {params:?}: {err}"),
        }
    }

    // Dragging past the admissible boundary stops on it.
    let (clamped, hit) = ShapeParams::ROUND.clamp_toward(ShapeParams::new(-0.5, 0.0));
    println!("clamp toward (-0.5, 0): {clamped:?} (clamped: {hit})");
    Ok(())
}
