//! Massless field: closed-form spectrum `kπ/L′` and the decay probability at
//! the centre, checked against the massive solver at a tiny mass.
//!
//!     cargo run --release --example massless

use rindler_purcell::detector::{
    decay_probability_accelerated, decay_probability_massless, Truncation,
};
use rindler_purcell::{CavityGeometry, DetectorConfig, Placement, RindlerGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = CavityGeometry::new(1.0, 0.0)?;
    let det = DetectorConfig::resonant(&base, 2, Placement::Center, 50.0, 1.0)?;
    for a in [0.01, 0.05, 0.1, 0.15, 0.2, 0.25] {
        let geom = RindlerGeometry::new(base, a)?;
        let p = decay_probability_massless(&geom, &det, Truncation::with_k_max(32))?;
        println!(
            "a = {a:<5} L' = {:.8}  Omega_2 = {:.8}  P = {:.6e}",
            geom.effective_length(),
            geom.massless_frequency(2)?,
            p.probability
        );
    }

    let a = 1.0;
    let closed = decay_probability_massless(
        &RindlerGeometry::new(base, a)?,
        &det,
        Truncation::with_k_max(16),
    )?;
    let light = RindlerGeometry::new(CavityGeometry::new(1.0, 1e-6)?, a)?;
    let modes = light.modes(16)?;
    let solved = decay_probability_accelerated(&light, &modes, &det, Truncation::with_k_max(16))?;
    println!(
        "a = 1: closed form {:.10e}, solver at m = 1e-6 {:.10e}",
        closed.probability, solved.probability
    );
    Ok(())
}
