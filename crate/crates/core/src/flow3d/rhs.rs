//! Unnormalized Ricci flow of `h dρ² + m (dθ² + cos²(√K₂ θ) dφ²)` and the
//! curvature quantities of that metric.

use crate::error::{Error, Result};
use crate::profile::{MetricProfile, ProfileKind};
use crate::stencil::{d1_at, d2_at, Parity};

/// Time derivatives of `h` and `m` at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowRates {
    pub dh: Vec<f64>,
    pub dm: Vec<f64>,
}

/// `∂h/∂t` from the local derivatives of `h` and `m`.
#[inline]
pub fn dh_dt(h: f64, h1: f64, m: f64, m1: f64, m2: f64) -> f64 {
    2.0 * m2 / m - m1 * m1 / (m * m) - m1 * h1 / (m * h)
}

/// `∂m/∂t` from the local derivatives of `h` and `m`.
#[inline]
pub fn dm_dt(h: f64, h1: f64, m1: f64, m2: f64, k2: f64) -> f64 {
    m2 / h - m1 * h1 / (2.0 * h * h) - 2.0 * k2
}

/// Right-hand side of the flow, with even reflection at both ends.
///
/// Fails with [`Error::Pinched`] if `m ≤ 0` at any node.
pub fn ricci_flow_rhs_3d(p: &MetricProfile) -> Result<FlowRates> {
    p.expect_kind(ProfileKind::Manifold3d)?;
    if let Some(i) = p.m.iter().position(|&m| m <= 0.0) {
        return Err(Error::Pinched {
            t: p.t,
            detail: format!("m = {} at rho = {}", p.m[i], p.rho[i]),
        });
    }
    if let Some(i) = p.h.iter().position(|&h| h <= 0.0 || !h.is_finite()) {
        return Err(Error::Unstable {
            t: p.t,
            detail: format!("h = {} at rho = {}", p.h[i], p.rho[i]),
        });
    }
    Ok(rates_unchecked(p))
}

/// Same stencils as [`ricci_flow_rhs_3d`] without the positivity guard;
/// used only for display-only continuation past a pinch.
pub(crate) fn rates_unchecked(p: &MetricProfile) -> FlowRates {
    let dx = p.step();
    let n = p.n();
    let mut dh = Vec::with_capacity(n);
    let mut dm = Vec::with_capacity(n);
    for i in 0..n {
        let (h, m) = (p.h[i], p.m[i]);
        let h1 = d1_at(&p.h, i, dx, Parity::Even);
        let m1 = d1_at(&p.m, i, dx, Parity::Even);
        let m2 = d2_at(&p.m, i, dx, Parity::Even);
        dh.push(dh_dt(h, h1, m, m1, m2));
        dm.push(dm_dt(h, h1, m1, m2, p.k2));
    }
    FlowRates { dh, dm }
}

/// Curvature of the 3-manifold at every node.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    /// Scalar curvature.
    pub scalar: Vec<f64>,
    /// Sectional curvature of the (ρ, θ) plane; equals that of (ρ, φ).
    pub k_ab: Vec<f64>,
    /// Sectional curvature of the orbit-sphere plane.
    pub k_bc: Vec<f64>,
    pub r11: Vec<f64>,
    pub r22: Vec<f64>,
}

/// The curvature quantities at the neck center ρ = 0, from the limits of
/// the general formulas at a point where `m′ = h′ = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeckCurvature {
    pub scalar: f64,
    pub k_ab: f64,
    pub k_bc: f64,
    pub r11: f64,
    pub r22: f64,
}

/// Pointwise curvatures from `h, h′, m, m′, m″`.
pub fn curvatures_at(h: f64, h1: f64, m: f64, m1: f64, m2: f64, k2: f64) -> NeckCurvature {
    let mm = m * m;
    NeckCurvature {
        scalar: m1 * m1 / (2.0 * mm * h) - 2.0 * m2 / (m * h) + m1 * h1 / (m * h * h)
            + 2.0 * k2 / m,
        k_ab: m1 * m1 / (4.0 * mm * h) - m2 / (2.0 * m * h) + m1 * h1 / (4.0 * m * h * h),
        k_bc: k2 / m - m1 * m1 / (4.0 * mm * h),
        r11: m1 * m1 / (2.0 * mm) - m2 / m + m1 * h1 / (2.0 * m * h),
        r22: m1 * h1 / (4.0 * h * h) - m2 / (2.0 * h) + k2,
    }
}

/// Curvatures at every node of a 3-manifold profile. Nodes with `m ≤ 0`
/// report NaN.
pub fn curvatures_3d(p: &MetricProfile) -> Result<CurvatureReport> {
    p.expect_kind(ProfileKind::Manifold3d)?;
    let dx = p.step();
    let n = p.n();
    let mut report = CurvatureReport {
        scalar: Vec::with_capacity(n),
        k_ab: Vec::with_capacity(n),
        k_bc: Vec::with_capacity(n),
        r11: Vec::with_capacity(n),
        r22: Vec::with_capacity(n),
    };
    for i in 0..n {
        let c = if p.m[i] > 0.0 {
            curvatures_at(
                p.h[i],
                d1_at(&p.h, i, dx, Parity::Even),
                p.m[i],
                d1_at(&p.m, i, dx, Parity::Even),
                d2_at(&p.m, i, dx, Parity::Even),
                p.k2,
            )
        } else {
            NeckCurvature {
                scalar: f64::NAN,
                k_ab: f64::NAN,
                k_bc: f64::NAN,
                r11: f64::NAN,
                r22: f64::NAN,
            }
        };
        report.scalar.push(c.scalar);
        report.k_ab.push(c.k_ab);
        report.k_bc.push(c.k_bc);
        report.r11.push(c.r11);
        report.r22.push(c.r22);
    }
    Ok(report)
}
