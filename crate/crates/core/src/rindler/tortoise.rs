//! Shooting integrator for `y'' = (V(ξ) − E) y`, `V(ξ) = m² e^{2aξ}`, on the
//! tortoise interval `[ξ₁, ξ₂]` with `y(ξ₁) = 0`, `y'(ξ₁) = 1`.
//!
//! Each step applies the fourth-order Magnus propagator built on the two
//! Gauss–Legendre nodes of the step. The exponential of the traceless 2×2
//! Magnus matrix is taken in closed form, so the scheme is exact for a
//! constant potential regardless of `hΩ`, and the derivative of the
//! discrete propagator with respect to `E` is carried alongside.

use super::RindlerGeometry;

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // √3/6
const COMMUTATOR_WEIGHT: f64 = 0.144_337_567_297_406_45; // √3/12
const MIN_STEPS: usize = 512;
const MAX_STEPS: usize = 65_536;

/// Solution of the shooting problem at the front mirror together with its
/// derivative in `E = Ω²`.
#[derive(Debug, Clone, Copy)]
pub struct Shot {
    pub value: f64,
    pub slope: f64,
    pub d_value: f64,
    pub d_slope: f64,
}

/// Uniform step grid in `ξ` with the potential tabulated at the Gauss nodes.
#[derive(Debug)]
pub struct TortoiseGrid {
    xi1: f64,
    step: f64,
    mass_sq: f64,
    accel: f64,
    nodes: Vec<(f64, f64)>,
}

struct Propagator {
    p: [[f64; 2]; 2],
    dp: [[f64; 2]; 2],
}

fn propagator(q1: f64, q2: f64, h: f64) -> Propagator {
    let qbar = 0.5 * (q1 + q2);
    let d = COMMUTATOR_WEIGHT * h * h * (q1 - q2);
    let s2 = d * d + h * h * qbar;
    let (c, sh, dsh) = if s2.abs() < 1e-3 {
        (
            1.0 + s2 * (0.5 + s2 * (1.0 / 24.0 + s2 / 720.0)),
            1.0 + s2 * (1.0 / 6.0 + s2 * (1.0 / 120.0 + s2 / 5040.0)),
            1.0 / 6.0 + s2 * (1.0 / 60.0 + s2 / 1680.0),
        )
    } else if s2 > 0.0 {
        let s = s2.sqrt();
        let (c, sh) = (s.cosh(), s.sinh() / s);
        (c, sh, (c - sh) / (2.0 * s2))
    } else {
        let w = (-s2).sqrt();
        let (c, sh) = (w.cos(), w.sin() / w);
        (c, sh, (c - sh) / (2.0 * s2))
    };
    // ∂s²/∂E = −h², ∂C/∂s² = Sh/2.
    let dc = -0.5 * h * h * sh;
    let dsh = -h * h * dsh;
    Propagator {
        p: [[c + sh * d, sh * h], [sh * h * qbar, c - sh * d]],
        dp: [
            [dc + dsh * d, dsh * h],
            [dsh * h * qbar - sh * h, dc - dsh * d],
        ],
    }
}

/// The propagator without its energy derivative.
fn transfer(q1: f64, q2: f64, h: f64) -> [[f64; 2]; 2] {
    let qbar = 0.5 * (q1 + q2);
    let d = COMMUTATOR_WEIGHT * h * h * (q1 - q2);
    let s2 = d * d + h * h * qbar;
    let (c, sh) = if s2.abs() < 1e-3 {
        (
            1.0 + s2 * (0.5 + s2 * (1.0 / 24.0 + s2 / 720.0)),
            1.0 + s2 * (1.0 / 6.0 + s2 * (1.0 / 120.0 + s2 / 5040.0)),
        )
    } else if s2 > 0.0 {
        let s = s2.sqrt();
        (s.cosh(), s.sinh() / s)
    } else {
        let w = (-s2).sqrt();
        let (sin, cos) = w.sin_cos();
        (cos, sin / w)
    };
    [[c + sh * d, sh * h], [sh * h * qbar, c - sh * d]]
}

impl TortoiseGrid {
    pub fn new(geom: &RindlerGeometry) -> Self {
        let length = geom.effective_length();
        let a = geom.accel();
        let m = geom.mass();
        // Resolve the potential's variation: steps scale with the e-folding
        // count a·L′ and with the largest mass-scale phase m·L′.
        let demand = 64.0 * (1.0 + m * length) * (1.0 + a * length);
        let n = (demand.ceil() as usize).clamp(MIN_STEPS, MAX_STEPS);
        let xi1 = geom.xi1();
        let step = length / n as f64;
        let mass_sq = m * m;
        let nodes = (0..n)
            .map(|i| {
                let start = xi1 + step * i as f64;
                let v = |t: f64| mass_sq * (2.0 * a * (start + t * step)).exp();
                (v(0.5 - GAUSS_OFFSET), v(0.5 + GAUSS_OFFSET))
            })
            .collect();
        Self {
            xi1,
            step,
            mass_sq,
            accel: a,
            nodes,
        }
    }

    pub fn steps(&self) -> usize {
        self.nodes.len()
    }

    fn potential(&self, xi: f64) -> f64 {
        self.mass_sq * (2.0 * self.accel * xi).exp()
    }

    /// Integrates to the front mirror, carrying `∂/∂E`.
    pub fn shoot(&self, energy: f64) -> Shot {
        let (mut y, mut p) = (0.0, 1.0);
        let (mut dy, mut dp) = (0.0, 0.0);
        for &(v1, v2) in &self.nodes {
            let prop = propagator(v1 - energy, v2 - energy, self.step);
            let m = prop.p;
            let dm = prop.dp;
            let ny = m[0][0] * y + m[0][1] * p;
            let np = m[1][0] * y + m[1][1] * p;
            let ndy = dm[0][0] * y + dm[0][1] * p + m[0][0] * dy + m[0][1] * dp;
            let ndp = dm[1][0] * y + dm[1][1] * p + m[1][0] * dy + m[1][1] * dp;
            y = ny;
            p = np;
            dy = ndy;
            dp = ndp;
        }
        Shot {
            value: y,
            slope: p,
            d_value: dy,
            d_slope: dp,
        }
    }

    /// `y(ξ₂)` alone.
    pub fn shoot_value(&self, energy: f64) -> f64 {
        let (mut y, mut p) = (0.0, 1.0);
        for &(v1, v2) in &self.nodes {
            let m = transfer(v1 - energy, v2 - energy, self.step);
            let ny = m[0][0] * y + m[0][1] * p;
            p = m[1][0] * y + m[1][1] * p;
            y = ny;
        }
        y
    }

    /// `∫ y² dξ` over the cavity at an eigenvalue, from the identity
    /// `∫ y² = y'(ξ₂) ∂_E y(ξ₂)` for solutions launched with `E`-independent
    /// data at `ξ₁`.
    pub fn norm_integral(&self, energy: f64) -> f64 {
        let shot = self.shoot(energy);
        shot.slope * shot.d_value - shot.value * shot.d_slope
    }

    /// `y(ξ)` for the launch at `ξ₁`.
    pub fn value_at(&self, energy: f64, xi: f64) -> f64 {
        let dist = xi - self.xi1;
        if dist <= 0.0 {
            return 0.0;
        }
        let full = ((dist / self.step).floor() as usize).min(self.nodes.len());
        let (mut y, mut p) = (0.0, 1.0);
        for &(v1, v2) in &self.nodes[..full] {
            let m = transfer(v1 - energy, v2 - energy, self.step);
            let ny = m[0][0] * y + m[0][1] * p;
            p = m[1][0] * y + m[1][1] * p;
            y = ny;
        }
        let rest = dist - full as f64 * self.step;
        if rest > 0.0 {
            let start = self.xi1 + full as f64 * self.step;
            let v1 = self.potential(start + (0.5 - GAUSS_OFFSET) * rest);
            let v2 = self.potential(start + (0.5 + GAUSS_OFFSET) * rest);
            let m = transfer(v1 - energy, v2 - energy, rest);
            y = m[0][0] * y + m[0][1] * p;
        }
        y
    }
}
