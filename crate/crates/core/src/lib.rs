//! Transition probability of a two-level Unruh–DeWitt detector that
//! co-accelerates with an ideal 1+1 dimensional Dirichlet cavity.
//!
//! The crate covers the resting cavity (closed-form modes), the uniformly
//! accelerated cavity in Rindler coordinates (modes built from modified
//! Bessel functions of imaginary order, or the closed form for a massless
//! field), the first-order decay probability of a detector at the cavity
//! centre or at a node of a resting-cavity mode, and acceleration sweeps.
//!
//! Units are natural (ħ = c = 1); probabilities are in the arbitrary units
//! fixed by the coupling `ε`.

pub mod cli;
pub mod detector;
pub mod error;
pub mod inertial;
pub mod numeric;
pub mod rindler;
pub mod specfun;
pub mod sweep;

pub use detector::{DecayResult, DetectorConfig, ModeTerm, Placement};
pub use error::{Error, Result};
pub use inertial::CavityGeometry;
pub use rindler::{ModeRoute, RindlerGeometry, RindlerMode};
pub use sweep::{Figure, PlacementSet, SweepPlan, SweepResult};
