//! Two-level detector coupled to the cavity field: placements and the
//! first-order decay probability, at rest and under acceleration.
//!
//! Every mode contributes `|ε F_k(x_d) (e^{iΔ_kτ} − 1)/Δ_k|²` with
//! `Δ_k = Ω_k − ω`. It is evaluated as `ε² F_k² τ² sinc²(Δ_kτ/2)`, which is
//! the same number away from resonance and stays finite as `Δ_k → 0`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::inertial::{sin_pi, CavityGeometry};
use crate::rindler::{RindlerGeometry, RindlerMode};

/// Where the detector sits, measured in the resting cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// On the cavity's reference trajectory, `χ = 1/a`.
    Center,
    /// Node `index` (1..mode−1, counted from the rear mirror) of resting mode
    /// `mode`: offset `−L/2 + index·L/mode` from the centre.
    Node { mode: usize, index: usize },
    /// Arbitrary proper offset from the centre.
    Offset(f64),
}

impl Placement {
    pub fn node(mode: usize, index: usize) -> Result<Self> {
        if mode < 2 {
            return Err(Error::Detector(format!(
                "node placement needs mode n >= 2, got {mode}"
            )));
        }
        if index == 0 || index >= mode {
            return Err(Error::Detector(format!(
                "node index {index} outside 1..={} for mode {mode}",
                mode - 1
            )));
        }
        Ok(Placement::Node { mode, index })
    }

    /// Proper offset from the cavity centre for a cavity of length `length`.
    pub fn offset(&self, length: f64) -> Result<f64> {
        match *self {
            Placement::Center => Ok(0.0),
            Placement::Node { mode, index } => {
                Placement::node(mode, index)?;
                Ok(-0.5 * length + index as f64 * length / mode as f64)
            }
            Placement::Offset(x) if x.is_finite() => Ok(x),
            Placement::Offset(x) => Err(Error::Detector(format!("offset {x} is not finite"))),
        }
    }

    pub(crate) fn resonant_mode(&self) -> Option<usize> {
        match *self {
            Placement::Node { mode, .. } => Some(mode),
            _ => None,
        }
    }

    /// Short column label: `center`, `node4_2`, `x0.25`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Placement::Center => write!(f, "center"),
            Placement::Node { mode, index } => write!(f, "node{mode}_{index}"),
            Placement::Offset(x) => write!(f, "x{x}"),
        }
    }
}

/// The `n − 1` node positions `χ = 1/a − L/2 + jL/n` of resting mode `n`,
/// in increasing `χ`.
pub fn node_positions(geom: &RindlerGeometry, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Detector(format!(
            "node placement needs mode n >= 2, got {n}"
        )));
    }
    let length = geom.length();
    Ok((1..n)
        .map(|j| 1.0 / geom.accel() - 0.5 * length + j as f64 * length / n as f64)
        .collect())
}

/// Detector gap, coupling, interaction time and placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub omega: f64,
    pub epsilon: f64,
    pub tau: f64,
    pub placement: Placement,
}

impl DetectorConfig {
    pub fn new(omega: f64, epsilon: f64, tau: f64, placement: Placement) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Detector(format!(
                "gap frequency must be > 0, got {omega}"
            )));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Detector(format!(
                "coupling must be > 0, got {epsilon}"
            )));
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::Detector(format!(
                "interaction time must be >= 0, got {tau}"
            )));
        }
        placement.offset(1.0)?;
        Ok(Self {
            omega,
            epsilon,
            tau,
            placement,
        })
    }

    /// Detector tuned to resting-cavity mode `n`, `ω = ω_n`.
    pub fn resonant(
        cavity: &CavityGeometry,
        n: usize,
        placement: Placement,
        tau: f64,
        epsilon: f64,
    ) -> Result<Self> {
        Self::new(cavity.mode_frequency(n)?, epsilon, tau, placement)
    }

    /// `ε² F² τ² sinc²((Ω − ω)τ/2)`.
    pub fn mode_term(&self, mode_value: f64, mode_frequency: f64) -> f64 {
        let amplitude = self.epsilon
            * mode_value
            * self.tau
            * sinc(0.5 * (mode_frequency - self.omega) * self.tau);
        amplitude * amplitude
    }
}

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// How many modes to sum and when to call the sum converged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub k_max: usize,
    /// The sum is flagged converged when each of the last `window` terms is
    /// at most `rel_tol` times the accumulated probability.
    pub rel_tol: f64,
    pub window: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            k_max: 64,
            rel_tol: 1e-4,
            window: 5,
        }
    }
}

impl Truncation {
    pub fn with_k_max(k_max: usize) -> Self {
        Self {
            k_max,
            ..Self::default()
        }
    }
}

/// Contribution of one cavity mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerm {
    pub k: usize,
    pub frequency: f64,
    pub term: f64,
}

/// Decay probability with its per-mode breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayResult {
    pub probability: f64,
    pub terms: Vec<ModeTerm>,
    pub truncation_k: usize,
    pub converged: bool,
}

pub(crate) fn collect_terms<I>(terms: I, truncation: Truncation) -> Result<DecayResult>
where
    I: IntoIterator<Item = Result<(usize, f64, f64)>>,
{
    let mut out = Vec::new();
    let mut probability = 0.0;
    for t in terms {
        let (k, frequency, term) = t?;
        if !(term.is_finite() && term >= 0.0) {
            return Err(Error::NonConvergence {
                what: "mode term evaluation",
                iterations: k,
            });
        }
        probability += term;
        out.push(ModeTerm { k, frequency, term });
    }
    let window = truncation.window.max(1).min(out.len());
    let tail = out[out.len() - window..]
        .iter()
        .map(|t| t.term)
        .fold(0.0, f64::max);
    let converged = !out.is_empty() && tail <= truncation.rel_tol * probability;
    Ok(DecayResult {
        probability,
        truncation_k: out.len(),
        terms: out,
        converged,
    })
}

/// Decay probability of a detector co-accelerating with the cavity, summed
/// over the supplied (solved and normalised) modes. The mode value is taken
/// at the detector's position; the detuning is `Ω_k − ω` with `ω` fixed at
/// its resting-cavity value.
pub fn decay_probability_accelerated(
    geom: &RindlerGeometry,
    modes: &[RindlerMode],
    det: &DetectorConfig,
    truncation: Truncation,
) -> Result<DecayResult> {
    let x = det.placement.offset(geom.length())?;
    if x.abs() >= 0.5 * geom.length() {
        return Err(Error::Detector(format!(
            "detector offset {x} is not strictly inside the cavity"
        )));
    }
    if let Some(m) = modes.iter().find(|m| !m.is_normalized()) {
        return Err(Error::Detector(format!("mode {} is not normalised", m.k())));
    }
    let terms = modes.iter().take(truncation.k_max).map(|mode| {
        let f = geom.mode_value_at_offset(mode, x)?;
        Ok((mode.k(), mode.omega(), det.mode_term(f, mode.omega())))
    });
    collect_terms(terms, truncation)
}

/// Massless-field decay probability from the closed-form spectrum
/// `Ω_k = kπ/L′` and modes `sin(Ω_k(ξ − ξ₁))/sqrt(kπ)`.
pub fn decay_probability_massless(
    geom: &RindlerGeometry,
    det: &DetectorConfig,
    truncation: Truncation,
) -> Result<DecayResult> {
    if geom.mass() != 0.0 {
        return Err(Error::Detector(format!(
            "closed-form massless probability needs m = 0, got {}",
            geom.mass()
        )));
    }
    let x = det.placement.offset(geom.length())?;
    if x.abs() >= 0.5 * geom.length() {
        return Err(Error::Detector(format!(
            "detector offset {x} is not strictly inside the cavity"
        )));
    }
    let lp = geom.effective_length();
    let phase = (geom.xi_of_offset(x) - geom.xi1()) / lp;
    let terms = (1..=truncation.k_max).map(|k| {
        let kf = k as f64;
        let omega = kf * PI / lp;
        let f = sin_pi(kf * phase) / (kf * PI).sqrt();
        Ok((k, omega, det.mode_term(f, omega)))
    });
    collect_terms(terms, truncation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rgeom(m: f64, a: f64) -> RindlerGeometry {
        RindlerGeometry::new(CavityGeometry::new(1.0, m).unwrap(), a).unwrap()
    }

    #[test]
    fn node_positions_examples() {
        let g = rgeom(1.0, 1.0);
        assert_eq!(node_positions(&g, 2).unwrap(), vec![1.0]);
        let p = node_positions(&g, 3).unwrap();
        assert!((p[0] - 5.0 / 6.0).abs() < 1e-15 && (p[1] - 7.0 / 6.0).abs() < 1e-15);
        let g = rgeom(1.0, 0.3);
        assert_eq!(node_positions(&g, 4).unwrap()[1], 1.0 / 0.3);
        assert!(node_positions(&g, 1).is_err());
    }

    #[test]
    fn placement_validation() {
        assert!(Placement::node(1, 1).is_err());
        assert!(Placement::node(3, 0).is_err());
        assert!(Placement::node(3, 3).is_err());
        assert_eq!(Placement::node(4, 2).unwrap().offset(1.0).unwrap(), 0.0);
        assert_eq!(Placement::node(4, 3).unwrap().label(), "node4_3");
    }

    #[test]
    fn detector_validation() {
        assert!(DetectorConfig::new(0.0, 1.0, 1.0, Placement::Center).is_err());
        assert!(DetectorConfig::new(1.0, 0.0, 1.0, Placement::Center).is_err());
        assert!(DetectorConfig::new(1.0, 1.0, -1.0, Placement::Center).is_err());
        assert!(DetectorConfig::new(1.0, 1.0, 0.0, Placement::Center).is_ok());
    }

    #[test]
    fn sinc_is_continuous() {
        assert_eq!(sinc(0.0), 1.0);
        let a = sinc(0.999_999e-4);
        let b = sinc(1.000_001e-4);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn zero_time_gives_zero() {
        let g = rgeom(0.0, 0.8);
        let det = DetectorConfig::resonant(g.base(), 2, Placement::Center, 0.0, 1.0).unwrap();
        let r = decay_probability_massless(&g, &det, Truncation::default()).unwrap();
        assert_eq!(r.probability, 0.0);
        let g = rgeom(1.0, 0.8);
        let modes = g.modes(8).unwrap();
        let det = DetectorConfig::resonant(g.base(), 2, Placement::Center, 0.0, 1.0).unwrap();
        let r = decay_probability_accelerated(&g, &modes, &det, Truncation::with_k_max(8)).unwrap();
        assert_eq!(r.probability, 0.0);
    }

    #[test]
    fn massless_resonant_factor() {
        // L = 1, a = 1: sin²(2π ln 2 / ln 3).
        let g = rgeom(0.0, 1.0);
        let arg: f64 = 2.0 * PI * 2f64.ln() / 3f64.ln();
        assert!((arg - 3.96425).abs() < 1e-4);
        let expected = arg.sin().powi(2);
        assert!((expected - 0.53722).abs() < 1e-4);
        let tau = 1e-6;
        let det = DetectorConfig::new(1.0, 1.0, tau, Placement::Center).unwrap();
        let r = decay_probability_massless(&g, &det, Truncation::with_k_max(2)).unwrap();
        let factor = r.terms[1].term * 2.0 * PI / (tau * tau);
        assert!((factor - expected).abs() < 1e-9, "{factor}");
    }

    #[test]
    fn massless_small_acceleration_recovers_rest() {
        let g = rgeom(0.0, 1e-6);
        for k in 1..=6 {
            let det = DetectorConfig::new(1.0, 1.0, 1e-8, Placement::Center).unwrap();
            let r = decay_probability_massless(&g, &det, Truncation::with_k_max(k)).unwrap();
            let factor = r.terms[k - 1].term * k as f64 * PI / 1e-16;
            let rest = (k as f64 * PI / 2.0).sin().powi(2);
            assert!((factor - rest).abs() < 1e-5, "k = {k}: {factor}");
        }
    }

    #[test]
    fn unnormalised_modes_rejected() {
        let g = rgeom(1.0, 1.0);
        let raw = g.solve_eigenfrequencies(3).unwrap();
        let det = DetectorConfig::new(6.0, 1.0, 1.0, Placement::Center).unwrap();
        assert!(decay_probability_accelerated(&g, &raw, &det, Truncation::with_k_max(3)).is_err());
    }

    #[test]
    fn single_mode_resonant_limit() {
        let g = rgeom(1.0, 0.5);
        let modes = g.modes(2).unwrap();
        let omega = modes[1].omega();
        let tau = 1e-7;
        let det = DetectorConfig::new(omega, 1.0, tau, Placement::Center).unwrap();
        let r = decay_probability_accelerated(&g, &modes[1..2], &det, Truncation::with_k_max(1))
            .unwrap();
        let f = g.mode_value(&modes[1], 2.0).unwrap();
        assert!((r.probability - f * f * tau * tau).abs() <= 1e-14 * f * f * tau * tau);
    }
}
