//! Decay probability of a detector held at rest, as a function of its
//! position, with the per-mode breakdown at the centre.
//!
//!     cargo run --release --example resting_cavity

use rindler_purcell::detector::Truncation;
use rindler_purcell::{CavityGeometry, DetectorConfig, Placement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cavity = CavityGeometry::new(1.0, 1.0)?;
    let tau = 50.0;
    for i in 0..=8 {
        let x = -0.5 + i as f64 / 8.0;
        let det = DetectorConfig::resonant(&cavity, 2, Placement::Offset(x), tau, 1.0)?;
        let p = cavity.decay_probability_rest(&det, Truncation::with_k_max(32))?;
        println!("x = {x:>6.3}  P = {:.6e}", p.probability);
    }

    // At the centre the resonant mode has a node, so only detuned modes contribute.
    let det = DetectorConfig::resonant(&cavity, 2, Placement::Center, tau, 1.0)?;
    let p = cavity.decay_probability_rest(&det, Truncation::with_k_max(8))?;
    for t in &p.terms {
        println!(
            "  k = {}  omega = {:.6}  term = {:.3e}",
            t.k, t.frequency, t.term
        );
    }
    Ok(())
}
