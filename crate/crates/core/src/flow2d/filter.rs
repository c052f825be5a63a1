use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::sqrt_m;
use crate::profile::{FlowStatus, MetricProfile, ProfileKind};
use crate::stencil::trapezoid;

/// Amplitudes of `h = Σ hᵢ cos 2iρ` and `√m = Σ mᵢ sin (2i+1)ρ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralCoefficients {
    pub h_modes: Vec<f64>,
    pub m_modes: Vec<f64>,
}

impl SpectralCoefficients {
    /// `Σ (2i+1) mᵢ`, the slope of the projected `√m` at `ρ = 0`.
    pub fn pole_slope(&self) -> f64 {
        self.m_modes
            .iter()
            .enumerate()
            .map(|(i, c)| (2 * i + 1) as f64 * c)
            .sum()
    }

    pub fn h_at(&self, rho: f64) -> f64 {
        self.h_modes
            .iter()
            .enumerate()
            .map(|(i, c)| c * (2.0 * i as f64 * rho).cos())
            .sum()
    }

    pub fn radius_at(&self, rho: f64) -> f64 {
        self.m_modes
            .iter()
            .enumerate()
            .map(|(i, c)| c * ((2 * i + 1) as f64 * rho).sin())
            .sum()
    }
}

/// Projection coefficients by trapezoid quadrature on the node grid.
pub fn spectral_coefficients(p: &MetricProfile, n_h: usize, n_m: usize) -> Result<SpectralCoefficients> {
    p.expect_kind(ProfileKind::Surface2d)?;
    let dx = p.step();
    let u = sqrt_m(p);
    let mut f = vec![0.0; p.n()];
    let mut project = |values: &[f64], basis: &dyn Fn(f64) -> f64, scale: f64| {
        for (k, (fv, r)) in f.iter_mut().zip(&p.rho).enumerate() {
            *fv = values[k] * basis(*r);
        }
        trapezoid(&f, dx) * scale / PI
    };
    let h_modes = (0..=n_h)
        .map(|i| {
            let w = 2.0 * i as f64;
            project(&p.h, &|r| (w * r).cos(), if i == 0 { 1.0 } else { 2.0 })
        })
        .collect();
    let m_modes = (0..=n_m)
        .map(|i| {
            let w = (2 * i + 1) as f64;
            project(&u, &|r| (w * r).sin(), 2.0)
        })
        .collect();
    Ok(SpectralCoefficients { h_modes, m_modes })
}

/// Pole correction factor `(c + Kx²)/(1 + Kx²)` with `x = ρ − ρ_pole`.
pub fn pole_factor(c: f64, k_pole: f64, x: f64) -> f64 {
    let kx2 = k_pole * x * x;
    (c + kx2) / (1.0 + kx2)
}

/// Drops short-wavelength modes of `h` and `√m`, then rescales `√m` near
/// each pole so that `|∂√m/∂ρ| = √h` there.
///
/// Both poles get the same constant `c`. Since each factor is nearly 1 at
/// the far pole, `c` solves `c (c + Kπ²)/(1 + Kπ²) = √h(0)/Σ(2i+1)mᵢ`,
/// which makes the corrected slope exact at both ends.
///
/// The result has status [`FlowStatus::Unstable`] if `Σ(2i+1)mᵢ ≤ 0` or the
/// projected `√m` is not positive on the interior.
pub fn spectral_filter(p: &MetricProfile, n_h: usize, n_m: usize, k_pole: f64) -> Result<MetricProfile> {
    let coef = spectral_coefficients(p, n_h, n_m)?;
    let n = p.n();
    let mut out = p.clone();
    for i in 0..n {
        out.h[i] = coef.h_at(p.rho[i]);
    }
    let s = coef.pole_slope();
    let h_pole = out.h[0];
    if !(s > 0.0) || !(h_pole > 0.0) {
        out.status = FlowStatus::Unstable;
        return Ok(out);
    }
    let target = h_pole.sqrt() / s;
    let far = k_pole * PI * PI;
    let c = 0.5 * (-far + (far * far + 4.0 * target * (1.0 + far)).sqrt());
    for i in 0..n {
        let r = p.rho[i];
        let u = coef.radius_at(r) * pole_factor(c, k_pole, r) * pole_factor(c, k_pole, r - PI);
        if (i > 0 && i < n - 1) && !(u > 0.0) {
            out.status = FlowStatus::Unstable;
        }
        out.m[i] = u * u;
    }
    out.m[0] = 0.0;
    out.m[n - 1] = 0.0;
    Ok(out)
}
