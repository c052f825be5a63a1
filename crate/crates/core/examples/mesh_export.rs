//! Revolves the dumbbell's generating curve into a closed triangle mesh
//! and writes it as OBJ.
//!
//! cargo run -p ricci-rev --example mesh_export [out.obj]

use std::fs::File;
use std::io::BufWriter;

use ricci_rev::geometry::generating_curve;
use ricci_rev::mesh::revolve_mesh;
use ricci_rev::{make_initial_surface, ShapeParams};

fn main() -> ricci_rev::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "dumbbell.obj".into());
    let p = make_initial_surface(ShapeParams::DUMBBELL, 256)?;
    let curve = generating_curve(&p);
    let mesh = revolve_mesh(&curve, 48)?.welded();
    println!(
        "{} vertices, {} triangles, watertight {}, Euler characteristic {}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.is_watertight(),
        mesh.euler_characteristic()
    );
    mesh.write_obj(BufWriter::new(File::create(&out)?))?;
    println!("wrote {out}");
    Ok(())
}
