//! Resting and accelerated spectra side by side, with the solver route used
//! at each acceleration.
//!
//!     cargo run --release --example spectra

use rindler_purcell::{CavityGeometry, RindlerGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = CavityGeometry::new(1.0, 1.0)?;
    println!(
        "{:>6} {:>4} {:>12} {:>12} {:>10}  route",
        "a", "k", "omega_k", "Omega_k", "shift"
    );
    for a in [1e-3, 0.3, 1.0, 1.8] {
        let geom = RindlerGeometry::new(base, a)?;
        for mode in geom.modes(4)? {
            let omega = base.mode_frequency(mode.k())?;
            println!(
                "{a:>6} {:>4} {omega:>12.8} {:>12.8} {:>10.2e}  {}",
                mode.k(),
                mode.omega(),
                (mode.omega() - omega) / omega,
                mode.route().name()
            );
        }
    }
    Ok(())
}
