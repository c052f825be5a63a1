//! Triangle meshes of surfaces of revolution.

use std::collections::{HashMap, HashSet};
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GeneratingCurve;

/// Indexed triangle mesh with outward-facing counterclockwise triangles.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
}

/// Revolves the curve about the x-axis with `segments` azimuthal steps.
///
/// Every accepted node becomes a ring of `segments` vertices; rings of
/// adjacent grid nodes are joined by two triangles per segment. Rings on
/// the axis are kept, so their triangles are degenerate; see
/// [`TriangleMesh::welded`].
pub fn revolve_mesh(c: &GeneratingCurve, segments: usize) -> Result<TriangleMesh> {
    if segments < 3 {
        return Err(Error::InvalidConfig(format!(
            "need at least 3 segments, got {segments}"
        )));
    }
    let mut mesh = TriangleMesh {
        vertices: Vec::with_capacity(c.len() * segments),
        triangles: Vec::new(),
    };
    for &[x, y] in &c.points {
        for k in 0..segments {
            let phi = TAU * k as f64 / segments as f64;
            mesh.vertices.push([x, y * phi.cos(), y * phi.sin()]);
        }
    }
    let s = segments as u32;
    for j in 0..c.len().saturating_sub(1) {
        if c.index[j + 1] != c.index[j] + 1 {
            continue;
        }
        let (r0, r1) = (j as u32 * s, (j as u32 + 1) * s);
        for k in 0..s {
            let k1 = (k + 1) % s;
            let (a, b, cc, d) = (r0 + k, r0 + k1, r1 + k, r1 + k1);
            mesh.triangles.push([a, b, cc]);
            mesh.triangles.push([b, d, cc]);
        }
    }
    Ok(mesh)
}

impl TriangleMesh {
    /// Merges coincident vertices and drops degenerate triangles.
    pub fn welded(&self) -> TriangleMesh {
        let mut key_to_new: HashMap<[u64; 3], u32> = HashMap::new();
        let mut remap = Vec::with_capacity(self.vertices.len());
        let mut out = TriangleMesh::default();
        for v in &self.vertices {
            // +0.0 and −0.0 must coincide.
            let key = v.map(|c| (c + 0.0).to_bits());
            let id = *key_to_new.entry(key).or_insert_with(|| {
                out.vertices.push(*v);
                (out.vertices.len() - 1) as u32
            });
            remap.push(id);
        }
        for t in &self.triangles {
            let t = t.map(|i| remap[i as usize]);
            if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                out.triangles.push(t);
            }
        }
        out
    }

    fn edge_counts(&self) -> HashMap<(u32, u32), usize> {
        let mut edges = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        edges
    }

    /// `V − E + F` over the vertices used by triangles.
    pub fn euler_characteristic(&self) -> i64 {
        let used: HashSet<u32> = self.triangles.iter().flatten().copied().collect();
        let edges = self.edge_counts().len();
        used.len() as i64 - edges as i64 + self.triangles.len() as i64
    }

    /// Number of closed loops formed by edges that belong to one triangle.
    pub fn boundary_loops(&self) -> usize {
        let boundary: Vec<(u32, u32)> = self
            .edge_counts()
            .into_iter()
            .filter(|&(_, n)| n == 1)
            .map(|(e, _)| e)
            .collect();
        // Connected components of the boundary graph.
        let mut parent: HashMap<u32, u32> = HashMap::new();
        fn find(parent: &mut HashMap<u32, u32>, x: u32) -> u32 {
            let p = *parent.entry(x).or_insert(x);
            if p == x {
                x
            } else {
                let r = find(parent, p);
                parent.insert(x, r);
                r
            }
        }
        for &(a, b) in &boundary {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
        let keys: Vec<u32> = parent.keys().copied().collect();
        keys.into_iter()
            .map(|k| find(&mut parent, k))
            .collect::<HashSet<_>>()
            .len()
    }

    /// Closed and consistently used: every edge is shared by two triangles.
    pub fn is_watertight(&self) -> bool {
        !self.triangles.is_empty() && self.edge_counts().values().all(|&n| n == 2)
    }

    /// Wavefront OBJ with positions and faces only.
    pub fn to_obj(&self) -> String {
        let mut s = String::with_capacity(40 * (self.vertices.len() + self.triangles.len()));
        for v in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }

    pub fn write_obj<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_obj().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generating_curve;
    use crate::shape::{make_initial_surface, ShapeParams};

    #[test]
    fn sphere_counts() {
        let p = make_initial_surface(ShapeParams::ROUND, 64).unwrap();
        let c = generating_curve(&p);
        let m = revolve_mesh(&c, 4).unwrap();
        assert_eq!(m.vertices.len(), 4 * 64);
        assert_eq!(m.triangles.len(), 2 * 4 * 63);
        let w = m.welded();
        assert!(w.is_watertight());
        assert_eq!(w.euler_characteristic(), 2);
        assert_eq!(w.boundary_loops(), 0);
        assert_eq!(w.vertices.len(), 4 * 62 + 2);
    }

    #[test]
    fn gap_opens_mesh() {
        let mut p = make_initial_surface(ShapeParams::ROUND, 64).unwrap();
        p.m[32] = -0.01;
        let c = generating_curve(&p);
        assert!(!c.complete);
        let w = revolve_mesh(&c, 16).unwrap().welded();
        assert!(!w.is_watertight());
        assert_eq!(w.boundary_loops(), 2);
    }

    #[test]
    fn obj_is_one_based() {
        let p = make_initial_surface(ShapeParams::ROUND, 32).unwrap();
        let m = revolve_mesh(&generating_curve(&p), 8).unwrap().welded();
        let obj = m.to_obj();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), m.vertices.len());
        assert!(obj.lines().filter(|l| l.starts_with("f ")).all(|l| !l.contains(" 0")));
    }

    #[test]
    fn triangles_face_outward() {
        let p = make_initial_surface(ShapeParams::ROUND, 32).unwrap();
        let m = revolve_mesh(&generating_curve(&p), 12).unwrap().welded();
        let center = [1.0, 0.0, 0.0];
        for t in &m.triangles {
            let [a, b, c] = t.map(|i| m.vertices[i as usize]);
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
            let r = [a[0] - center[0], a[1], a[2]];
            assert!(n[0] * r[0] + n[1] * r[1] + n[2] * r[2] > 0.0);
        }
    }

    #[test]
    fn too_few_segments() {
        let p = make_initial_surface(ShapeParams::ROUND, 32).unwrap();
        assert!(revolve_mesh(&generating_curve(&p), 2).is_err());
    }
}
