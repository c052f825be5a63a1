//! Saves a flowed surface as a JSON snapshot and reloads it bit for bit.
//!
//! cargo run -p ricci-rev --example snapshot

use ricci_rev::flow2d::{flow_surface, Flow2DConfig};
use ricci_rev::snapshot::Snapshot;
use ricci_rev::{make_initial_surface, ShapeParams};

fn main() -> ricci_rev::Result<()> {
    let p = make_initial_surface(ShapeParams::DUMBBELL, 128)?;
    let (q, _) = flow_surface(&p, &Flow2DConfig::with_dt(2e-3), 20)?;
    let snap = Snapshot::of(&q)?;
    let path = std::env::temp_dir().join("ricci-rev-snapshot.json");
    snap.save(&path)?;
    let back = Snapshot::load(&path)?.to_profile()?;
    println!("wrote {} ({} nodes, t = {})", path.display(), q.n(), q.t);
    println!("reloaded profile identical: {}", back == q);
    println!("diagnostics: {:?}", snap.diagnostics);
    Ok(())
}
