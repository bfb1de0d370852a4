//! Field modes of a uniformly accelerated cavity in Rindler coordinates.
//!
//! The cavity's centre follows the trajectory of proper acceleration `a`, so
//! the mirrors sit at `χ₁ = 1/a − L/2` and `χ₂ = 1/a + L/2`. A stationary
//! mode `F(χ) e^{−iΩτ}` obeys
//!
//! ```text
//! χ² F'' + χ F' + (Ω²/a² − m²χ²) F = 0,
//! ```
//!
//! the modified Bessel equation of order `iΩ/a` in `mχ`. The solution that
//! vanishes at `χ₂` is the Bessel cross product `S(Ω/a, mχ, mχ₂)`; the
//! eigenfrequencies are the roots of `S(Ω/a, mχ₁, mχ₂)`. Modes are
//! normalised to unit Klein-Gordon norm, `2(Ω/a) ∫ F² dχ/χ = 1`.
//!
//! In the tortoise coordinate `ξ = ln(aχ)/a` the same equation reads
//! `F_ξξ + (Ω² − m² e^{2aξ}) F = 0` on `[ξ₁, ξ₂]`. For a massless field this
//! is a resting cavity of length `L′ = ξ₂ − ξ₁`. For small accelerations the
//! Bessel series cancels catastrophically, and the massive problem is
//! integrated in this form instead (see [`ModeRoute`]).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inertial::{sin_pi, CavityGeometry};
use crate::numeric::{brent, AdaptiveSimpson};
use crate::specfun;

mod tortoise;

pub use tortoise::TortoiseGrid;

/// Relative accuracy to which eigenfrequencies are refined.
pub const ROOT_REL_TOL: f64 = 1e-12;
/// Series cancellation factor above which the Bessel route is abandoned.
pub const ROUTE_MAX_CONDITION: f64 = 1e4;
/// Upper bound on the number of scan evaluations while bracketing roots.
pub const MAX_SCAN_POINTS: usize = 200_000;
/// Cancellation factor tolerated for individual Bessel-route evaluations.
const EVAL_MAX_CONDITION: f64 = 1e6;

/// Geometry of a cavity whose centre has proper acceleration `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerGeometry {
    base: CavityGeometry,
    accel: f64,
}

/// How the mode profile is evaluated.
#[derive(Debug, Clone)]
pub enum ModeRoute {
    /// Closed form for a massless field.
    Massless,
    /// Power series of the imaginary-order Bessel functions.
    Bessel,
    /// Magnus integration of the tortoise-coordinate equation.
    Tortoise(Arc<TortoiseGrid>),
}

impl ModeRoute {
    pub fn name(&self) -> &'static str {
        match self {
            ModeRoute::Massless => "closed-form",
            ModeRoute::Bessel => "bessel",
            ModeRoute::Tortoise(_) => "tortoise",
        }
    }
}

/// A cavity eigenmode: index, eigenfrequency `Ω_k` and normalisation `N_k`.
#[derive(Debug, Clone)]
pub struct RindlerMode {
    k: usize,
    omega: f64,
    norm: f64,
    normalized: bool,
    /// Orientation so the profile rises from the rear mirror.
    sign: f64,
    route: ModeRoute,
    /// Reduced Bessel series at the front mirror, cached for the Bessel route.
    edge: Complex64,
}

impl RindlerMode {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn route(&self) -> &ModeRoute {
        &self.route
    }
}

impl RindlerGeometry {
    pub fn new(base: CavityGeometry, accel: f64) -> Result<Self> {
        if !(accel.is_finite() && accel > 0.0) {
            return Err(Error::Geometry(format!(
                "acceleration must be > 0, got {accel}"
            )));
        }
        if !(accel * base.length() < 2.0) {
            return Err(Error::Geometry(format!(
                "a·L = {} must stay below 2 (rear mirror beyond the horizon)",
                accel * base.length()
            )));
        }
        Ok(Self { base, accel })
    }

    pub fn base(&self) -> &CavityGeometry {
        &self.base
    }

    pub fn accel(&self) -> f64 {
        self.accel
    }

    pub fn length(&self) -> f64 {
        self.base.length()
    }

    pub fn mass(&self) -> f64 {
        self.base.mass()
    }

    fn half_al(&self) -> f64 {
        0.5 * self.accel * self.length()
    }

    /// Rear mirror `χ₁ = 1/a − L/2`.
    pub fn chi1(&self) -> f64 {
        1.0 / self.accel - 0.5 * self.length()
    }

    /// Front mirror `χ₂ = 1/a + L/2`.
    pub fn chi2(&self) -> f64 {
        1.0 / self.accel + 0.5 * self.length()
    }

    pub fn xi1(&self) -> f64 {
        (-self.half_al()).ln_1p() / self.accel
    }

    pub fn xi2(&self) -> f64 {
        self.half_al().ln_1p() / self.accel
    }

    /// Tortoise coordinate of a point at proper offset `x` from the centre.
    pub fn xi_of_offset(&self, x: f64) -> f64 {
        (self.accel * x).ln_1p() / self.accel
    }

    /// Proper offset from the centre of the point with tortoise coordinate `xi`.
    pub fn offset_of_xi(&self, xi: f64) -> f64 {
        (self.accel * xi).exp_m1() / self.accel
    }

    /// `L′ = ξ₂ − ξ₁ = (1/a) ln((1 + aL/2)/(1 − aL/2))`.
    pub fn effective_length(&self) -> f64 {
        let h = self.half_al();
        (h.ln_1p() - (-h).ln_1p()) / self.accel
    }

    fn offset_of_chi(&self, chi: f64) -> Result<f64> {
        let x = chi - 1.0 / self.accel;
        let half = 0.5 * self.length();
        let slack = 64.0 * f64::EPSILON * chi.abs().max(1.0);
        if !(x >= -half - slack && x <= half + slack) {
            return Err(Error::Domain(format!(
                "χ = {chi} lies outside the mirrors [{}, {}]",
                self.chi1(),
                self.chi2()
            )));
        }
        Ok(x.clamp(-half, half))
    }

    /// Massless eigenfrequency `Ω_k = kπ/L′`.
    pub fn massless_frequency(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::Domain("mode index starts at 1".into()));
        }
        Ok(k as f64 * PI / self.effective_length())
    }

    /// Bounds on `Ω_k` from the extreme values of the potential
    /// `m² e^{2aξ}` on `[ξ₁, ξ₂]`.
    pub fn frequency_window(&self, k: usize) -> (f64, f64) {
        let m = self.mass();
        let h = self.half_al();
        let kl = k as f64 * PI / self.effective_length();
        let vmin = (m * (1.0 - h)).powi(2);
        let vmax = (m * (1.0 + h)).powi(2);
        ((kl * kl + vmin).sqrt(), (kl * kl + vmax).sqrt())
    }

    /// Picks the Bessel series when it is well conditioned across the cavity
    /// for the lowest mode, and the tortoise integration otherwise.
    pub fn select_route(&self) -> ModeRoute {
        if self.mass() == 0.0 {
            return ModeRoute::Massless;
        }
        let x2 = self.mass() * self.chi2();
        let nu = self.frequency_window(1).0 / self.accel;
        if x2 <= specfun::MAX_ARGUMENT {
            if let Ok(s) = specfun::reduced_series(nu, x2) {
                if s.condition <= ROUTE_MAX_CONDITION {
                    return ModeRoute::Bessel;
                }
            }
        }
        ModeRoute::Tortoise(Arc::new(TortoiseGrid::new(self)))
    }

    /// Bessel-route profile `2 S̃(Ω/a, mχ, mχ₂)` at proper offset `x`, where
    /// `S̃` is the gamma-scaled cross product.
    fn bessel_profile(&self, omega: f64, edge: Complex64, x: f64) -> Result<f64> {
        let half = 0.5 * self.length();
        if x >= half {
            return Ok(0.0);
        }
        let nu = omega / self.accel;
        let u = self.mass() * (1.0 / self.accel + x);
        let s = specfun::reduced_series(nu, u)?;
        if s.condition > EVAL_MAX_CONDITION {
            return Err(Error::IllConditioned {
                nu,
                x: u,
                condition: s.condition,
            });
        }
        // ln(χ/χ₂) from offsets, free of cancellation near the front mirror.
        let log_ratio = (self.accel * (x - half) / (1.0 + self.half_al())).ln_1p();
        let phase = Complex64::from_polar(1.0, nu * log_ratio);
        Ok(2.0 * (phase * s.sum * edge.conj()).im)
    }

    fn bessel_edge(&self, omega: f64) -> Result<Complex64> {
        let nu = omega / self.accel;
        let x2 = self.mass() * self.chi2();
        let s = specfun::reduced_series(nu, x2)?;
        if s.condition > EVAL_MAX_CONDITION {
            return Err(Error::IllConditioned {
                nu,
                x: x2,
                condition: s.condition,
            });
        }
        Ok(s.sum)
    }

    /// `∫ F² dξ` of the un-normalised Bessel profile at an eigenfrequency,
    /// from `∫ y² dξ = −y′(ξ₁) ∂_E y(ξ₁)`, which holds because the profile
    /// vanishes at the front mirror for every `E = Ω²`.
    fn bessel_norm_integral(&self, omega: f64) -> Result<f64> {
        let a = self.accel;
        let nu = omega / a;
        let m = self.mass();
        let (chi1, chi2) = (self.chi1(), self.chi2());
        let checked = |x: f64| -> Result<specfun::ReducedSeries> {
            let s = specfun::reduced_series(nu, x)?;
            if s.condition > EVAL_MAX_CONDITION {
                return Err(Error::IllConditioned {
                    nu,
                    x,
                    condition: s.condition,
                });
            }
            Ok(s)
        };
        let rear = checked(m * chi1)?;
        let front = checked(m * chi2)?;
        let log_ratio = (-self.length() / chi2).ln_1p();
        let phase = Complex64::from_polar(1.0, nu * log_ratio);
        let i = Complex64::i();
        let edge = front.sum.conj();
        // ∂_ν of 2 Im[e^{iνℓ} J(u) conj J(v)] at fixed χ.
        let d_nu = 2.0
            * (phase
                * (i * log_ratio * rear.sum * edge
                    + rear.dnu * edge
                    + rear.sum * front.dnu.conj()))
            .im;
        // d/dξ = aχ d/dχ.
        let slope = 2.0 * a * chi1 * (phase * (i * nu / chi1 * rear.sum + m * rear.dsum) * edge).im;
        let d_energy = d_nu / (2.0 * a * omega);
        Ok(-slope * d_energy)
    }

    /// Quantization function whose roots in `Ω` are the eigenfrequencies.
    fn quantization(&self, route: &ModeRoute, omega: f64) -> Result<f64> {
        match route {
            ModeRoute::Massless => Ok((omega * self.effective_length()).sin()),
            ModeRoute::Bessel => {
                let edge = self.bessel_edge(omega)?;
                self.bessel_profile(omega, edge, -0.5 * self.length())
            }
            ModeRoute::Tortoise(grid) => Ok(grid.shoot_value(omega * omega)),
        }
    }

    /// First `k_max` eigenfrequencies of the massive cavity, in increasing
    /// order and refined to `|ΔΩ|/Ω < 1e-12`. The returned modes carry unit
    /// normalisation until passed through [`normalize_mode`](Self::normalize_mode).
    pub fn solve_eigenfrequencies(&self, k_max: usize) -> Result<Vec<RindlerMode>> {
        if self.mass() == 0.0 {
            return Err(Error::Domain(
                "massive eigenfrequency solver needs m > 0; use the massless closed form".into(),
            ));
        }
        match self.select_route() {
            ModeRoute::Bessel => match self.solve_with(ModeRoute::Bessel, k_max) {
                Err(Error::IllConditioned { .. }) | Err(Error::Domain(_)) => self.solve_with(
                    ModeRoute::Tortoise(Arc::new(TortoiseGrid::new(self))),
                    k_max,
                ),
                other => other,
            },
            route => self.solve_with(route, k_max),
        }
    }

    /// Solves on an explicitly chosen route.
    pub fn solve_with(&self, route: ModeRoute, k_max: usize) -> Result<Vec<RindlerMode>> {
        if k_max == 0 {
            return Ok(Vec::new());
        }
        let roots = self.bracket_roots(&route, k_max)?;
        let mut modes = Vec::with_capacity(k_max);
        for (i, (lo, hi)) in roots.into_iter().enumerate() {
            let omega = if lo == hi {
                lo
            } else {
                brent(|w| self.quantization(&route, w), lo, hi, ROOT_REL_TOL, 200)?
            };
            modes.push(self.raw_mode(i + 1, omega, route.clone())?);
        }
        Ok(modes)
    }

    fn raw_mode(&self, k: usize, omega: f64, route: ModeRoute) -> Result<RindlerMode> {
        let edge = match route {
            ModeRoute::Bessel => self.bessel_edge(omega)?,
            _ => Complex64::new(0.0, 0.0),
        };
        let mut mode = RindlerMode {
            k,
            omega,
            norm: 1.0,
            normalized: false,
            sign: 1.0,
            route,
            edge,
        };
        if let ModeRoute::Bessel = mode.route {
            // Probe inside the first lobe next to the rear mirror.
            let xi = self.xi1() + 0.25 * self.effective_length() / k as f64;
            let probe = self.bessel_profile(omega, edge, self.offset_of_xi(xi))?;
            mode.sign = if probe < 0.0 { -1.0 } else { 1.0 };
        }
        Ok(mode)
    }

    /// Scans the frequency windows of modes `1..=k_max` for sign changes of
    /// the quantization function and checks that root `k` falls inside
    /// window `k`.
    fn bracket_roots(&self, route: &ModeRoute, k_max: usize) -> Result<Vec<(f64, f64)>> {
        let windows: Vec<(f64, f64)> = (1..=k_max).map(|k| self.frequency_window(k)).collect();
        let spacings = [
            PI / self.effective_length(),
            self.base.mode_frequency(2)? - self.base.mode_frequency(1)?,
            self.frequency_window(2).1 - self.frequency_window(1).1,
        ];
        let step = 0.2 * spacings.iter().cloned().fold(f64::INFINITY, f64::min);
        let pad = 0.5 * step;

        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for &(lo, hi) in &windows {
            let lo = (lo - pad).max(0.5 * lo);
            let hi = hi + pad;
            match intervals.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => intervals.push((lo, hi)),
            }
        }
        let total_points: f64 = intervals
            .iter()
            .map(|(lo, hi)| ((hi - lo) / step).ceil() + 1.0)
            .sum();
        let scan_lo = intervals[0].0;
        let scan_hi = intervals.last().map(|w| w.1).unwrap_or(scan_lo);
        if total_points > MAX_SCAN_POINTS as f64 {
            return Err(Error::Bracketing {
                lo: scan_lo,
                hi: scan_hi,
                found: 0,
                wanted: k_max,
            });
        }

        let mut brackets = Vec::with_capacity(k_max);
        'outer: for &(lo, hi) in &intervals {
            let n = ((hi - lo) / step).ceil().max(1.0) as usize;
            let mut prev_w = lo;
            let mut prev_g = self.quantization(route, lo)?;
            for i in 1..=n {
                let w = if i == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / n as f64
                };
                let g = self.quantization(route, w)?;
                if prev_g == 0.0 {
                    brackets.push((prev_w, prev_w));
                } else if g != 0.0 && g.signum() != prev_g.signum() {
                    brackets.push((prev_w, w));
                }
                if brackets.len() == k_max {
                    break 'outer;
                }
                prev_w = w;
                prev_g = g;
            }
        }
        if brackets.len() < k_max {
            return Err(Error::Bracketing {
                lo: scan_lo,
                hi: scan_hi,
                found: brackets.len(),
                wanted: k_max,
            });
        }
        for (i, (blo, bhi)) in brackets.iter().enumerate() {
            let (wlo, whi) = windows[i];
            if *bhi < wlo - pad || *blo > whi + pad {
                return Err(Error::Bracketing {
                    lo: wlo,
                    hi: whi,
                    found: i,
                    wanted: k_max,
                });
            }
        }
        Ok(brackets)
    }

    /// Unnormalised profile of `mode` at proper offset `x` from the centre.
    fn profile(&self, mode: &RindlerMode, x: f64) -> Result<f64> {
        match &mode.route {
            ModeRoute::Massless => {
                let xi = self.xi_of_offset(x);
                Ok(sin_pi(
                    mode.k as f64 * (xi - self.xi1()) / self.effective_length(),
                ))
            }
            ModeRoute::Bessel => Ok(mode.sign * self.bessel_profile(mode.omega, mode.edge, x)?),
            ModeRoute::Tortoise(grid) => {
                Ok(grid.value_at(mode.omega * mode.omega, self.xi_of_offset(x)))
            }
        }
    }

    /// Mode value `F_{Ω_k}(χ)` for `χ₁ ≤ χ ≤ χ₂`.
    pub fn mode_value(&self, mode: &RindlerMode, chi: f64) -> Result<f64> {
        let x = self.offset_of_chi(chi)?;
        self.mode_value_at_offset(mode, x)
    }

    /// Mode value at proper offset `x ∈ [−L/2, L/2]` from the cavity centre.
    pub fn mode_value_at_offset(&self, mode: &RindlerMode, x: f64) -> Result<f64> {
        let half = 0.5 * self.length();
        if !(x >= -half && x <= half) {
            return Err(Error::Domain(format!(
                "offset {x} lies outside the mirrors at ±{half}"
            )));
        }
        Ok(mode.norm * self.profile(mode, x)?)
    }

    /// Klein-Gordon overlap `(Ω_j + Ω_k)/a ∫ F_j F_k dχ/χ` by adaptive
    /// quadrature. Equals 1 for a normalised mode with itself.
    pub fn kg_overlap(&self, a: &RindlerMode, b: &RindlerMode) -> Result<f64> {
        let half = 0.5 * self.length();
        let accel = self.accel;
        let mut failure = None;
        let quad = AdaptiveSimpson::default().with_panels(4 * a.k.max(b.k) + 8);
        let integral = quad.integrate(
            |x| {
                let fa = self.mode_value_at_offset(a, x);
                let fb = self.mode_value_at_offset(b, x);
                match (fa, fb) {
                    (Ok(fa), Ok(fb)) => fa * fb / (1.0 + accel * x),
                    (Err(e), _) | (_, Err(e)) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            -half,
            half,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok((a.omega + b.omega) * integral)
    }

    /// Sets `N_k` so the mode has unit Klein-Gordon norm `2Ω ∫ F² dξ = 1`.
    /// Both massive routes use the eigenvalue-derivative identity for the
    /// integral; the massless norm is `1/sqrt(kπ)`.
    pub fn normalize_mode(&self, mode: &RindlerMode) -> Result<RindlerMode> {
        let mut out = mode.clone();
        out.norm = 1.0;
        let norm_sq = match &mode.route {
            ModeRoute::Massless => {
                out.norm = 1.0 / (mode.k as f64 * PI).sqrt();
                out.normalized = true;
                return Ok(out);
            }
            ModeRoute::Bessel => 2.0 * mode.omega * self.bessel_norm_integral(mode.omega)?,
            ModeRoute::Tortoise(grid) => {
                2.0 * mode.omega * grid.norm_integral(mode.omega * mode.omega)
            }
        };
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(Error::NonConvergence {
                what: "mode normalisation",
                iterations: 0,
            });
        }
        out.norm = 1.0 / norm_sq.sqrt();
        out.normalized = true;
        Ok(out)
    }

    /// Closed-form massless modes `1..=k_max`, already normalised.
    pub fn massless_modes(&self, k_max: usize) -> Result<Vec<RindlerMode>> {
        (1..=k_max)
            .map(|k| {
                let raw = RindlerMode {
                    k,
                    omega: self.massless_frequency(k)?,
                    norm: 1.0,
                    normalized: false,
                    sign: 1.0,
                    route: ModeRoute::Massless,
                    edge: Complex64::new(0.0, 0.0),
                };
                self.normalize_mode(&raw)
            })
            .collect()
    }

    /// The first `k_max` normalised modes: closed form for `m = 0`, solved and
    /// normalised otherwise.
    pub fn modes(&self, k_max: usize) -> Result<Vec<RindlerMode>> {
        if self.mass() == 0.0 {
            return self.massless_modes(k_max);
        }
        self.solve_eigenfrequencies(k_max)?
            .iter()
            .map(|m| self.normalize_mode(m))
            .collect()
    }
}
