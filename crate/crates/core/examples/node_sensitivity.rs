//! Compares detectors placed at every node of resting modes 3, 4 and 5 and
//! ranks them by their peak probability over small accelerations.
//!
//!     cargo run --release --example node_sensitivity

use rindler_purcell::detector::node_positions;
use rindler_purcell::sweep::{linear_grid, node_ranking, run_sweep};
use rindler_purcell::{CavityGeometry, Figure, RindlerGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for figure in [Figure::NodesMode3, Figure::NodesMode4, Figure::NodesMode5] {
        let mut plan = figure.plan();
        plan.accels = linear_grid(0.005, 0.4, 80);
        let geom = RindlerGeometry::new(CavityGeometry::new(plan.length, plan.mass)?, 0.2)?;
        let chis: Vec<String> = node_positions(&geom, plan.mode_n)?
            .iter()
            .map(|c| format!("{c:.3}"))
            .collect();
        println!(
            "mode {} (node chi at a = 0.2: {})",
            plan.mode_n,
            chis.join(", ")
        );
        let result = run_sweep(&plan)?;
        for (placement, peak) in node_ranking(&result) {
            println!("  {placement:<8} peak P = {peak:.4e}");
        }
    }
    Ok(())
}
