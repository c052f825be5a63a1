//! Geometric functionals of a sampled metric of revolution.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::profile::{MetricProfile, ProfileKind};
use crate::shape::TOL_EMBED;
use crate::stencil::{cumulative_trapezoid, d1_at, d2_at, trapezoid, Parity};

/// `√m` with the pole nodes of a surface pinned to zero.
pub(crate) fn sqrt_m(p: &MetricProfile) -> Vec<f64> {
    let mut u = p.radius();
    if p.kind == ProfileKind::Surface2d {
        let n = u.len();
        u[0] = 0.0;
        u[n - 1] = 0.0;
    }
    u
}

/// Parity of `√m` at the grid ends: odd through surface poles, even at
/// the reflection planes of a 3-manifold profile.
pub(crate) fn radius_parity(kind: ProfileKind) -> Parity {
    match kind {
        ProfileKind::Surface2d => Parity::Odd,
        ProfileKind::Manifold3d => Parity::Even,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embeddability {
    pub embeddable: bool,
    /// Largest `|∂√m/∂ρ| / √h` over interior nodes.
    pub max_ratio: f64,
    pub argmax_rho: f64,
}

/// Tests `|∂√m/∂ρ| ≤ √h` at interior nodes with central differences.
pub fn embeddability_check(p: &MetricProfile) -> Result<Embeddability> {
    let u = sqrt_m(p);
    let dx = p.step();
    let parity = radius_parity(p.kind);
    let mut max_ratio = 0.0;
    let mut argmax = 1;
    for i in 1..p.n() - 1 {
        let r = d1_at(&u, i, dx, parity).abs() / p.h[i].sqrt();
        if !(r <= max_ratio) {
            max_ratio = r;
            argmax = i;
        }
    }
    Ok(Embeddability {
        embeddable: max_ratio <= 1.0 + TOL_EMBED,
        max_ratio,
        argmax_rho: p.rho[argmax],
    })
}

/// Largest relative mismatch between `|∂√m/∂ρ|` and `√h` at the two poles
/// of a surface, using a fourth-order stencil on the odd extension.
pub fn pole_smoothness_error(p: &MetricProfile) -> Result<f64> {
    p.expect_kind(ProfileKind::Surface2d)?;
    let u = sqrt_m(p);
    let n = p.n();
    let dx = p.step();
    let slope0 = (8.0 * u[1] - u[2]) / (6.0 * dx);
    let slope1 = (8.0 * u[n - 2] - u[n - 3]) / (6.0 * dx);
    let e0 = (slope0 / p.h[0].sqrt() - 1.0).abs();
    let e1 = (slope1 / p.h[n - 1].sqrt() - 1.0).abs();
    Ok(e0.max(e1))
}

/// Planar cross-section whose revolution about the x-axis realizes the metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratingCurve {
    /// `(x, y)` at every accepted node.
    pub points: Vec<[f64; 2]>,
    /// ρ of each accepted node.
    pub rho: Vec<f64>,
    /// Grid index of each accepted node.
    pub index: Vec<usize>,
    /// False when some node was omitted.
    pub complete: bool,
}

impl GeneratingCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `x(ρ) = ∫₀^ρ √(h − (∂√m/∂s)²) ds`, `y = √m`.
///
/// Nodes with `m < 0` or a negative radicand are omitted and contribute
/// nothing to `x`.
pub fn generating_curve(p: &MetricProfile) -> GeneratingCurve {
    let u = sqrt_m(p);
    let dx = p.step();
    let parity = radius_parity(p.kind);
    let n = p.n();
    let mut keep = vec![true; n];
    let radical: Vec<f64> = (0..n)
        .map(|i| {
            let s = d1_at(&u, i, dx, parity);
            let q = p.h[i] - s * s;
            if q < 0.0 || p.m[i] < 0.0 || !q.is_finite() {
                keep[i] = false;
                0.0
            } else {
                q.sqrt()
            }
        })
        .collect();
    let x = cumulative_trapezoid(&radical, dx);
    let mut curve = GeneratingCurve {
        points: Vec::with_capacity(n),
        rho: Vec::with_capacity(n),
        index: Vec::with_capacity(n),
        complete: keep.iter().all(|&k| k),
    };
    for i in (0..n).filter(|&i| keep[i]) {
        curve.points.push([x[i], u[i]]);
        curve.rho.push(p.rho[i]);
        curve.index.push(i);
    }
    curve
}

/// `2π ∫ √(h m) dρ`.
pub fn area(p: &MetricProfile) -> Result<f64> {
    p.expect_kind(ProfileKind::Surface2d)?;
    let f: Vec<f64> = p
        .h
        .iter()
        .zip(&p.m)
        .map(|(&h, &m)| (h * m.max(0.0)).sqrt())
        .collect();
    Ok(2.0 * PI * trapezoid(&f, p.step()))
}

/// `∫ K dA` with the same stencils the flow uses.
pub fn total_curvature(p: &MetricProfile) -> Result<f64> {
    p.expect_kind(ProfileKind::Surface2d)?;
    let u = sqrt_m(p);
    let dx = p.step();
    let n = p.n();
    // K √(hm) = −u″/√h + u′h′/(2 h^{3/2}); both terms vanish at the poles.
    let f: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                return 0.0;
            }
            let h = p.h[i];
            let u1 = d1_at(&u, i, dx, Parity::Odd);
            let u2 = d2_at(&u, i, dx, Parity::Odd);
            let h1 = d1_at(&p.h, i, dx, Parity::Even);
            -u2 / h.sqrt() + u1 * h1 / (2.0 * h * h.sqrt())
        })
        .collect();
    Ok(2.0 * PI * trapezoid(&f, dx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{make_initial_surface, ShapeParams};

    #[test]
    fn round_sphere_functionals() {
        let p = make_initial_surface(ShapeParams::ROUND, 512).unwrap();
        assert!((area(&p).unwrap() - 4.0 * PI).abs() < 1e-4);
        assert!((total_curvature(&p).unwrap() - 4.0 * PI).abs() < 1e-4);
        let e = embeddability_check(&p).unwrap();
        assert!(e.embeddable && e.max_ratio < 1.0);
        assert!(pole_smoothness_error(&p).unwrap() < 1e-9);
    }

    #[test]
    fn steep_profile_ratio() {
        let s = ShapeParams::new(-0.2, 0.0);
        let n = 1200;
        let rho = MetricProfile::uniform_grid(n, PI);
        let m = rho.iter().map(|&r| s.radius(r).powi(2)).collect();
        let p = MetricProfile::new(ProfileKind::Surface2d, rho, vec![1.0; n], m, 0.0).unwrap();
        let e = embeddability_check(&p).unwrap();
        assert!(!e.embeddable);
        // Dense sampling of the exact slope locates the true maximum.
        let (best, at) = (0..=200_000)
            .map(|k| {
                let r = PI * k as f64 / 200_000.0;
                (s.radius_slope(r).abs(), r)
            })
            .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
        assert!(best > 2.9);
        assert!((e.max_ratio - best).abs() < 1e-4, "{} vs {best}", e.max_ratio);
        assert!((e.argmax_rho - at).abs() < 5e-3);
    }

    #[test]
    fn negative_m_is_omitted() {
        let mut p = make_initial_surface(ShapeParams::ROUND, 64).unwrap();
        p.m[30] = -0.1;
        let c = generating_curve(&p);
        assert!(!c.complete);
        assert!(c.len() < 64);
        assert!(!c.rho.contains(&p.rho[30]));
    }

    #[test]
    fn round_curve_is_unit_semicircle() {
        let p = make_initial_surface(ShapeParams::ROUND, 512).unwrap();
        let c = generating_curve(&p);
        assert!(c.complete);
        assert_eq!(c.len(), 512);
        let last = c.points[511];
        assert!((last[0] - 2.0).abs() < 1e-4);
        assert!(c.points.windows(2).all(|w| w[1][0] >= w[0][0]));
        assert!(c.points.iter().all(|p| p[1] >= 0.0));
    }
}
