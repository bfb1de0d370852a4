//! Scalar numerical building blocks: adaptive Simpson quadrature and a
//! bracketed root refiner.

use crate::error::{Error, Result};

/// Adaptive Simpson quadrature with an absolute/relative error target.
///
/// The relative target is measured against the integral of `|f|` over the
/// whole interval, so it stays meaningful for integrands whose signed
/// integral cancels to zero (off-diagonal overlap integrals).
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of accepted plus pending sub-intervals.
    pub max_intervals: usize,
    /// Number of equal panels the interval is split into before refinement.
    pub initial_panels: usize,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_intervals: 10_000,
            initial_panels: 8,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl AdaptiveSimpson {
    pub fn with_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    pub fn integrate<F>(&self, mut f: F, lo: f64, hi: f64) -> Result<f64>
    where
        F: FnMut(f64) -> f64,
    {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Domain(format!("integration bounds [{lo}, {hi}]")));
        }
        if lo == hi {
            return Ok(0.0);
        }
        let width = hi - lo;
        let n = self.initial_panels.max(1);
        let mut stack = Vec::with_capacity(2 * n);
        let mut magnitude = 0.0;
        let mut f_prev = f(lo);
        for i in 0..n {
            let a = lo + width * i as f64 / n as f64;
            let b = if i + 1 == n {
                hi
            } else {
                lo + width * (i + 1) as f64 / n as f64
            };
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (f_prev, f(m), f(b));
            f_prev = fb;
            magnitude += (b - a) * (fa.abs() + 4.0 * fm.abs() + fb.abs()) / 6.0;
            stack.push(Panel {
                a,
                b,
                fa,
                fm,
                fb,
                whole: (b - a) * (fa + 4.0 * fm + fb) / 6.0,
            });
        }
        let tol = self.abs_tol.max(self.rel_tol * magnitude);

        let mut total = 0.0;
        let mut intervals = n;
        while let Some(p) = stack.pop() {
            let lm = 0.5 * (p.a + 0.5 * (p.a + p.b));
            let rm = 0.5 * (0.5 * (p.a + p.b) + p.b);
            let mid = 0.5 * (p.a + p.b);
            let (flm, frm) = (f(lm), f(rm));
            let left = (mid - p.a) * (p.fa + 4.0 * flm + p.fm) / 6.0;
            let right = (p.b - mid) * (p.fm + 4.0 * frm + p.fb) / 6.0;
            let delta = left + right - p.whole;
            let local_tol = tol * (p.b - p.a) / width;
            if delta.abs() <= 15.0 * local_tol || (p.b - p.a) <= width * f64::EPSILON * 16.0 {
                total += left + right + delta / 15.0;
                continue;
            }
            intervals += 1;
            if intervals > self.max_intervals {
                return Err(Error::Quadrature {
                    lo,
                    hi,
                    cap: self.max_intervals,
                });
            }
            stack.push(Panel {
                a: p.a,
                b: mid,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
            });
            stack.push(Panel {
                a: mid,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
            });
        }
        Ok(total)
    }
}

/// Refines a sign-changing bracket `[a, b]` of `f` with Brent's method
/// (inverse quadratic interpolation, secant and bisection steps) until the
/// bracket is narrower than `rel_tol * |x|`.
pub fn brent<F>(mut f: F, mut a: f64, mut b: f64, rel_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracketing {
            lo: a.min(b),
            hi: a.max(b),
            found: 0,
            wanted: 1,
        });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs().max(f64::MIN_POSITIVE);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::NonConvergence {
        what: "Brent root refinement",
        iterations: max_iter,
    })
}
