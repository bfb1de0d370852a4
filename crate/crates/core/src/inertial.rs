//! The resting cavity: Dirichlet modes, their frequencies and the decay
//! probability of a detector held at a fixed position.

use std::f64::consts::PI;

use crate::detector::{self, DecayResult, DetectorConfig, Truncation};
use crate::error::{Error, Result};

/// Ideal cavity of proper length `length` holding a scalar field of mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    length: f64,
    mass: f64,
}

impl CavityGeometry {
    pub fn new(length: f64, mass: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Geometry(format!(
                "cavity length must be > 0, got {length}"
            )));
        }
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(Error::Geometry(format!(
                "field mass must be >= 0, got {mass}"
            )));
        }
        Ok(Self { length, mass })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `ω_k = sqrt((kπ/L)² + m²)`.
    pub fn mode_frequency(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::Domain("mode index starts at 1".into()));
        }
        Ok((k as f64 * PI / self.length).hypot(self.mass))
    }

    /// `F_k(x) = sin(kπ(x + L/2)/L) / sqrt(ω_k L)` for `x` measured from the
    /// cavity centre.
    pub fn mode_function(&self, k: usize, x: f64) -> Result<f64> {
        let omega = self.mode_frequency(k)?;
        let half = 0.5 * self.length;
        if !(x >= -half && x <= half) {
            return Err(Error::Domain(format!(
                "position {x} lies outside the mirrors at ±{half}"
            )));
        }
        Ok(self.unchecked_mode_function(k, omega, x))
    }

    fn unchecked_mode_function(&self, k: usize, omega: f64, x: f64) -> f64 {
        let s = (x + 0.5 * self.length) / self.length;
        sin_pi(k as f64 * s) / (omega * self.length).sqrt()
    }

    /// Proper offset from the centre of a detector placement.
    pub fn placement_offset(&self, det: &DetectorConfig) -> Result<f64> {
        det.placement.offset(self.length)
    }

    /// First-order decay probability of a detector at rest inside the cavity,
    /// summed over modes `1..=k_max` in the resonance-stable form
    /// `ε² F_k(x₀)² τ² sinc²((ω_k − ω)τ/2)`.
    pub fn decay_probability_rest(
        &self,
        det: &DetectorConfig,
        truncation: Truncation,
    ) -> Result<DecayResult> {
        let x0 = self.placement_offset(det)?;
        if x0.abs() > 0.5 * self.length {
            return Err(Error::Detector(format!(
                "detector position {x0} lies outside the cavity"
            )));
        }
        if let Some(n) = det.placement.resonant_mode() {
            if truncation.k_max < n {
                return Err(Error::Detector(format!(
                    "k_max = {} does not reach the resonant mode {n}",
                    truncation.k_max
                )));
            }
        }
        let terms = (1..=truncation.k_max).map(|k| {
            let omega = self.mode_frequency(k)?;
            let f = self.unchecked_mode_function(k, omega, x0);
            Ok((k, omega, det.mode_term(f, omega)))
        });
        detector::collect_terms(terms, truncation)
    }
}

/// `sin(πy)`, exactly zero at integer `y`.
pub(crate) fn sin_pi(y: f64) -> f64 {
    let r = y - 2.0 * (0.5 * y).round();
    if r == r.trunc() {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}
