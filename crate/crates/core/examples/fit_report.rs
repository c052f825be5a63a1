//! Fits power laws in T - t to the neck quantities near the pinch.
//!
//! cargo run --release -p ricci-rev --example fit_report [eta]

use ricci_rev::fit::{fit_report, FitConfig};
use ricci_rev::flow3d::{series_flow, SeriesFlowConfig, SeriesState};

fn main() -> ricci_rev::Result<()> {
    let mut cfg = SeriesFlowConfig::reference();
    cfg.eta = std::env::args().nth(1).map_or(1e-5, |s| s.parse().expect("eta"));
    let traj = series_flow(&SeriesState::example_neck(), &cfg)?;
    let report = fit_report(&traj, &FitConfig::default())?;
    println!("{:>4} {:>9} {:>9} {:>15} {:>9} {:>9} {:>13}", "q", "c", "p", "T", "ref c", "ref p", "conditioning");
    for row in &report.rows {
        println!(
            "{:>4} {:>9.4} {:>9.4} {:>15.8e} {:>9.3} {:>9.3} {:>13.2}",
            row.quantity.name(),
            row.fit.c,
            row.fit.p,
            row.fit.t_pinch,
            row.reference.c,
            row.reference.p,
            row.fit.conditioning()
        );
    }
    let h = &report.h_pinned;
    println!("h with T pinned to the m fit: c {:.4}, p {:.4}", h.c, h.p);
    for n in &report.notes {
        println!("note: {n}");
    }
    Ok(())
}
