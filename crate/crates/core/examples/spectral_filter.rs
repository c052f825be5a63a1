//! Projects a perturbed round sphere onto the retained modes and shows
//! that the high mode is removed.
//!
//! cargo run -p ricci-rev --example spectral_filter

use ricci_rev::flow2d::{spectral_coefficients, spectral_filter};
use ricci_rev::{MetricProfile, ProfileKind};

fn main() -> ricci_rev::Result<()> {
    let n = 256;
    let rho = MetricProfile::uniform_grid(n, std::f64::consts::PI);
    let m = rho.iter().map(|r| (r.sin() + 0.01 * (13.0 * r).sin()).powi(2)).collect();
    let p = MetricProfile::new(ProfileKind::Surface2d, rho, vec![1.0; n], m, 0.0)?;

    let c = spectral_coefficients(&p, 5, 8)?;
    println!("sqrt(m) modes before: {:?}", c.m_modes.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>());
    let f = spectral_filter(&p, 5, 5, 100.0)?;
    let c = spectral_coefficients(&f, 5, 8)?;
    println!("sqrt(m) modes after:  {:?}", c.m_modes.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>());
    let dev = f
        .rho
        .iter()
        .zip(&f.m)
        .map(|(r, m)| (m.sqrt() - r.sin()).abs())
        .fold(0.0, f64::max);
    println!("max |sqrt(m) - sin rho| after filtering: {dev:.3e}");
    Ok(())
}
