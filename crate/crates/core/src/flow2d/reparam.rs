use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::sqrt_m;
use crate::interp::Pchip;
use crate::profile::{MetricProfile, ProfileKind};
use crate::stencil::cumulative_trapezoid;

/// Moves the nodes to equal arc length along the meridian, making `h`
/// constant. `√m` is resampled by monotone cubic interpolation against
/// arc length.
pub fn reparametrize_arclength(p: &MetricProfile) -> Result<MetricProfile> {
    p.expect_kind(ProfileKind::Surface2d)?;
    if let Some(i) = p.h.iter().position(|&h| !(h > 0.0)) {
        return Err(Error::Unstable {
            t: p.t,
            detail: format!("h = {} at rho = {}", p.h[i], p.rho[i]),
        });
    }
    let n = p.n();
    let dx = p.step();
    let root_h: Vec<f64> = p.h.iter().map(|h| h.sqrt()).collect();
    let ell = cumulative_trapezoid(&root_h, dx);
    let total = ell[n - 1];
    let scale = total / PI;
    let u = Pchip::new(&ell, &sqrt_m(p))?;
    let mut out = p.clone();
    out.h = vec![scale * scale; n];
    for i in 0..n {
        out.m[i] = u.eval(p.rho[i] * scale).max(0.0).powi(2);
    }
    out.m[0] = 0.0;
    out.m[n - 1] = 0.0;
    Ok(out)
}
