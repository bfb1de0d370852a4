//! A detector at the centre of an accelerated massive-field cavity, tuned to
//! the second resting mode. Resting at first, the centre sits on a node of
//! that mode; acceleration moves the node and the probability rises.
//!
//!     cargo run --release --example accelerated_center

use rindler_purcell::detector::{decay_probability_accelerated, Truncation};
use rindler_purcell::{CavityGeometry, DetectorConfig, Placement, RindlerGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = CavityGeometry::new(1.0, 1.0)?;
    let det = DetectorConfig::resonant(&base, 2, Placement::Center, 50.0, 1.0)?;
    let rest = base.decay_probability_rest(&det, Truncation::with_k_max(32))?;
    println!("rest        P = {:.6e}", rest.probability);
    for a in [1e-4, 0.01, 0.05, 0.1, 0.2, 0.4, 0.8, 1.2, 1.6] {
        let geom = RindlerGeometry::new(base, a)?;
        let modes = geom.modes(32)?;
        let p = decay_probability_accelerated(&geom, &modes, &det, Truncation::with_k_max(32))?;
        println!(
            "a = {a:<7} P = {:.6e}  ({}, converged: {})",
            p.probability,
            modes[0].route().name(),
            p.converged
        );
    }
    Ok(())
}
