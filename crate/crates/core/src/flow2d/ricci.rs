use crate::error::{Error, Result};
use crate::geometry::sqrt_m;
use crate::profile::{FlowStatus, MetricProfile, ProfileKind};
use crate::stencil::{d1_at, d2_at, d4_at, Parity};

/// Ricci components `R₁₁` and `R₂₂` at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct Ricci2d {
    pub r11: Vec<f64>,
    pub r22: Vec<f64>,
}

/// Ricci tensor of `h dρ² + m dθ²`.
///
/// Interior nodes use `R₁₁ = −u″/u + u′h′/(2uh)` with `u = √m` and
/// `R₂₂ = (m/h) R₁₁`. At the poles `R₂₂ = 0` and `R₁₁` is the limit
/// `−m⁗/(4m″) + h″/(2h)`.
pub fn ricci_tensor_2d(p: &MetricProfile) -> Result<Ricci2d> {
    p.expect_kind(ProfileKind::Surface2d)?;
    p.expect_ok()?;
    let n = p.n();
    let dx = p.step();
    let u = sqrt_m(p);
    let mut r11 = vec![0.0; n];
    let mut r22 = vec![0.0; n];
    for i in 1..n - 1 {
        let (h, ui) = (p.h[i], u[i]);
        let u1 = d1_at(&u, i, dx, Parity::Odd);
        let u2 = d2_at(&u, i, dx, Parity::Odd);
        let h1 = d1_at(&p.h, i, dx, Parity::Even);
        r11[i] = -u2 / ui + u1 * h1 / (2.0 * ui * h);
        r22[i] = -ui * u2 / h + ui * u1 * h1 / (2.0 * h * h);
    }
    for i in [0, n - 1] {
        let m2 = d2_at(&p.m, i, dx, Parity::Even);
        if m2 == 0.0 || !m2.is_finite() {
            return Err(Error::Unstable {
                t: p.t,
                detail: format!("m'' = {m2} at the pole rho = {}", p.rho[i]),
            });
        }
        let m4 = d4_at(&p.m, i, dx, Parity::Even);
        let h2 = d2_at(&p.h, i, dx, Parity::Even);
        r11[i] = -m4 / (4.0 * m2) + h2 / (2.0 * p.h[i]);
    }
    Ok(Ricci2d { r11, r22 })
}

/// One explicit step of `∂g/∂t = −2 Ric`. A negative `dt` flows backward.
///
/// The result carries status [`FlowStatus::Unstable`] if the tensor cannot
/// be evaluated or any value turns non-finite.
pub fn euler_step_2d(p: &MetricProfile, dt: f64) -> Result<MetricProfile> {
    p.expect_kind(ProfileKind::Surface2d)?;
    p.expect_ok()?;
    let mut out = p.clone();
    out.t += dt;
    if dt == 0.0 {
        return Ok(out);
    }
    let ric = match ricci_tensor_2d(p) {
        Ok(r) => r,
        Err(Error::Unstable { .. }) => {
            out.status = FlowStatus::Unstable;
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let n = p.n();
    for i in 0..n {
        out.h[i] -= 2.0 * dt * ric.r11[i];
        out.m[i] -= 2.0 * dt * ric.r22[i];
    }
    out.m[0] = 0.0;
    out.m[n - 1] = 0.0;
    if out.h.iter().chain(&out.m).any(|v| !v.is_finite()) {
        out.status = FlowStatus::Unstable;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::{make_initial_surface, ShapeParams};

    #[test]
    fn round_sphere_has_unit_ricci() {
        let p = make_initial_surface(ShapeParams::ROUND, 256).unwrap();
        let r = ricci_tensor_2d(&p).unwrap();
        for i in 0..256 {
            assert!((r.r11[i] - 1.0).abs() < 1e-4, "r11[{i}] = {}", r.r11[i]);
            assert!((r.r22[i] - p.m[i]).abs() < 1e-4);
        }
        assert_eq!(r.r22[0], 0.0);
    }

    #[test]
    fn scaled_sphere() {
        let mut p = make_initial_surface(ShapeParams::ROUND, 256).unwrap();
        let c2 = 2.5;
        p.h.iter_mut().for_each(|h| *h *= c2);
        p.m.iter_mut().for_each(|m| *m *= c2);
        let r = ricci_tensor_2d(&p).unwrap();
        for i in 0..256 {
            assert!((r.r11[i] - 1.0).abs() < 1e-4);
            assert!((r.r22[i] - p.rho[i].sin().powi(2)).abs() < 1e-4);
        }
    }

    #[test]
    fn euler_on_round_sphere() {
        let p = make_initial_surface(ShapeParams::ROUND, 256).unwrap();
        let q = euler_step_2d(&p, 0.01).unwrap();
        assert!(q.is_ok());
        for i in 0..256 {
            assert!((q.h[i] - 0.98).abs() < 1e-5);
            assert!((q.m[i] - 0.98 * p.rho[i].sin().powi(2)).abs() < 1e-5);
        }
        assert_eq!(q.m[0], 0.0);
        assert_eq!(q.m[255], 0.0);
        assert_eq!(euler_step_2d(&p, 0.0).unwrap(), p);
    }

    #[test]
    fn flat_pole_is_unstable() {
        let mut p = make_initial_surface(ShapeParams::ROUND, 64).unwrap();
        p.m[1] = 0.0;
        assert!(matches!(ricci_tensor_2d(&p), Err(Error::Unstable { .. })));
        let q = euler_step_2d(&p, 1e-3).unwrap();
        assert_eq!(q.status, FlowStatus::Unstable);
    }
}
