//! Complex gamma function and modified Bessel functions of purely imaginary
//! order, `I_{±iν}(x)` for real `x > 0`.
//!
//! The Bessel functions are summed from their power series
//!
//! ```text
//! I_{iν}(x) = (x/2)^{iν} / Γ(1+iν) · Σ_j (x²/4)^j / (j! (1+iν)_j)
//! ```
//!
//! where `(1+iν)_j` is the rising factorial, accumulated term by term so the
//! gamma function is evaluated once per call. For large `ν` the prefactor
//! `1/Γ(1+iν)` grows like `e^{πν/2}`, so the cavity code works with the
//! *scaled* function `Γ(1+iν) I_{iν}(x)`; the scale factor is common to every
//! argument at fixed order and drops out of the mode quantization and of the
//! normalized mode profile.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest argument accepted by the unscaled public evaluators.
pub const MAX_ARGUMENT: f64 = 500.0;
/// Largest order accepted by the unscaled public evaluators.
pub const MAX_ORDER: f64 = 500.0;
/// A series term is dropped once it falls below this fraction of the partial sum.
pub const TERM_CUTOFF: f64 = 1e-16;
/// Iteration cap for the power series.
pub const MAX_TERMS: usize = 10_000;
/// Cancellation factor (largest term over final sum) above which a series
/// result is rejected as inaccurate.
pub const MAX_CONDITION: f64 = 1e10;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Order `ν ≥ 0` of `I_{iν}`. In the cavity problem `ν = Ω/a`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(Self(nu))
        } else {
            Err(Error::Domain(format!(
                "Bessel order must be finite and >= 0, got {nu}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn ln_gamma_right_half(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Γ(z)` for `Re z ≥ 1/2`. The imaginary part is not reduced to the
/// principal branch; only `exp` of the result is meaningful.
pub fn ln_complex_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("gamma argument {z}")));
    }
    if z.re < 0.5 {
        return Err(Error::Domain(format!(
            "ln_complex_gamma needs Re z >= 1/2, got {z}"
        )));
    }
    Ok(ln_gamma_right_half(z))
}

/// Complex gamma function via a Lanczos approximation (g = 7, nine
/// coefficients), with the reflection formula for `Re z < 1/2`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("gamma argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::PoleOfGamma(z.re));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1−z) = π / sin(πz)
        let s = (PI * z).sin();
        let g = ln_gamma_right_half(1.0 - z).exp();
        return Ok(PI / (s * g));
    }
    Ok(ln_gamma_right_half(z).exp())
}

/// `|Γ(1+iν)|² = πν / sinh(πν)`, exact for real `ν`.
pub fn gamma_one_plus_i_norm_sqr(nu: f64) -> f64 {
    if nu == 0.0 {
        1.0
    } else {
        let x = PI * nu;
        x / x.sinh()
    }
}

/// Reduced power series `Σ_j (x²/4)^j / (j! (1+iν)_j)` at signed order `ν`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ReducedSeries {
    pub sum: Complex64,
    /// Derivative of the sum with respect to `x`.
    pub dsum: Complex64,
    /// Derivative of the sum with respect to `ν`.
    pub dnu: Complex64,
    /// Largest term magnitude divided by `|sum|`.
    pub condition: f64,
}

pub(crate) fn reduced_series(nu: f64, x: f64) -> Result<ReducedSeries> {
    let q = 0.25 * x * x;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut dnu = Complex64::new(0.0, 0.0);
    // Σ_{l≤j} ∂_ν ln(1/(l+iν)).
    let mut log_deriv = Complex64::new(0.0, 0.0);
    let mut largest: f64 = 1.0;
    for j in 1..=MAX_TERMS {
        let jf = j as f64;
        let shifted = Complex64::new(jf, nu);
        term *= q / (jf * shifted);
        sum += term;
        dsum += term * (2.0 * jf / x);
        log_deriv -= Complex64::i() / shifted;
        dnu += term * log_deriv;
        let mag = term.norm();
        largest = largest.max(mag);
        let ratio = q / (jf * shifted.norm());
        if ratio < 0.5 && mag <= TERM_CUTOFF * sum.norm() {
            let norm = sum.norm();
            let condition = if norm > 0.0 {
                largest / norm
            } else {
                f64::INFINITY
            };
            return Ok(ReducedSeries {
                sum,
                dsum,
                dnu,
                condition,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "imaginary-order Bessel series",
        iterations: MAX_TERMS,
    })
}

fn check_argument(x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!(
            "Bessel argument must be > 0, got {x}"
        )));
    }
    Ok(())
}

fn check_unscaled_domain(nu: f64, x: f64) -> Result<()> {
    check_argument(x)?;
    if x > MAX_ARGUMENT || nu.abs() > MAX_ORDER {
        return Err(Error::Domain(format!(
            "I_(i{nu})({x}) outside the series domain x <= {MAX_ARGUMENT}, nu <= {MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Scaled Bessel function `Γ(1+iν) I_{iν}(x) = (x/2)^{iν} Σ_j …` with
/// its `x`-derivative. No order cap applies; arguments above
/// [`MAX_ARGUMENT`] are rejected, as are results whose cancellation factor
/// exceeds `max_condition`.
pub(crate) fn scaled_with_derivative(
    nu: f64,
    x: f64,
    max_condition: f64,
) -> Result<(Complex64, Complex64)> {
    check_argument(x)?;
    if x > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "Bessel argument {x} exceeds {MAX_ARGUMENT}"
        )));
    }
    let s = reduced_series(nu, x)?;
    if s.condition > max_condition {
        return Err(Error::IllConditioned {
            nu,
            x,
            condition: s.condition,
        });
    }
    let phase = Complex64::from_polar(1.0, nu * (0.5 * x).ln());
    let value = phase * s.sum;
    let deriv = phase * (s.dsum + s.sum * Complex64::new(0.0, nu / x));
    Ok((value, deriv))
}

/// `I_{iν}(x)` at signed order. Used directly by tests of the unreduced
/// mode bracket; the public entry point takes a non-negative order.
pub(crate) fn bessel_i_signed_order(nu: f64, x: f64) -> Result<Complex64> {
    check_unscaled_domain(nu, x)?;
    let s = reduced_series(nu, x)?;
    if s.condition > MAX_CONDITION {
        return Err(Error::IllConditioned {
            nu,
            x,
            condition: s.condition,
        });
    }
    let ln_prefactor =
        Complex64::new(0.0, nu * (0.5 * x).ln()) - ln_gamma_right_half(Complex64::new(1.0, nu));
    let value = ln_prefactor.exp() * s.sum;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Domain(format!("I_(i{nu})({x}) overflows f64")));
    }
    Ok(value)
}

/// Modified Bessel function of the first kind of purely imaginary order,
/// `I_{iν}(x)`. `I_{-iν}(x)` is its complex conjugate for real `x, ν`.
pub fn bessel_i_imag_order(order: BesselOrder, x: f64) -> Result<Complex64> {
    bessel_i_signed_order(order.value(), x)
}

/// Scaled form `Γ(1+iν) I_{iν}(x)`; finite for every order.
pub fn bessel_i_imag_order_scaled(order: BesselOrder, x: f64) -> Result<Complex64> {
    scaled_with_derivative(order.value(), x, MAX_CONDITION).map(|(v, _)| v)
}

/// `Im[Γ(1+iν)I_{iν}(u) · conj(Γ(1+iν)I_{iν}(v))] = |Γ(1+iν)|² S(ν, u, v)`.
pub fn bessel_cross_product_scaled(order: BesselOrder, u: f64, v: f64) -> Result<f64> {
    let nu = order.value();
    check_argument(u)?;
    check_argument(v)?;
    let su = reduced_series(nu, u)?;
    let sv = reduced_series(nu, v)?;
    for (x, s) in [(u, &su), (v, &sv)] {
        if x > MAX_ARGUMENT {
            return Err(Error::Domain(format!(
                "Bessel argument {x} exceeds {MAX_ARGUMENT}"
            )));
        }
        if s.condition > MAX_CONDITION {
            return Err(Error::IllConditioned {
                nu,
                x,
                condition: s.condition,
            });
        }
    }
    Ok(scaled_cross(nu, u, v, su.sum, sv.sum))
}

/// `Im[(u/v)^{iν} a conj(b)]`, with the phase taken from `ln(u/v)` computed
/// without cancellation when `u ≈ v`.
pub(crate) fn scaled_cross(nu: f64, u: f64, v: f64, a: Complex64, b: Complex64) -> f64 {
    let log_ratio = ((u - v) / v).ln_1p();
    let phase = Complex64::from_polar(1.0, nu * log_ratio);
    (phase * a * b.conj()).im
}

/// Real cross product of the Rindler mode profile,
/// `S(ν, u, v) = Im[I_{iν}(u) conj(I_{iν}(v))]
///             = [I_{iν}(u) I_{-iν}(v) − I_{-iν}(u) I_{iν}(v)] / 2i`.
pub fn bessel_cross_product(order: BesselOrder, u: f64, v: f64) -> Result<f64> {
    let nu = order.value();
    check_unscaled_domain(nu, u)?;
    check_unscaled_domain(nu, v)?;
    let scaled = bessel_cross_product_scaled(order, u, v)?;
    let value = scaled / gamma_one_plus_i_norm_sqr(nu);
    if !value.is_finite() {
        return Err(Error::Domain(format!("S({nu}, {u}, {v}) overflows f64")));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn gamma_integers() {
        let one = complex_gamma(Complex64::new(1.0, 0.0)).unwrap();
        assert!((one.re - 1.0).abs() < 1e-14 && one.im.abs() < 1e-14);
        let g5 = complex_gamma(Complex64::new(5.0, 0.0)).unwrap();
        assert!(rel(g5.re, 24.0) < 1e-13, "{g5}");
    }

    #[test]
    fn gamma_half_and_reflection() {
        let g = complex_gamma(Complex64::new(0.5, 0.0)).unwrap();
        assert!(rel(g.re, PI.sqrt()) < 1e-13);
        let g = complex_gamma(Complex64::new(-0.5, 0.0)).unwrap();
        assert!(rel(g.re, -2.0 * PI.sqrt()) < 1e-13);
        let g = complex_gamma(Complex64::new(-2.5, 1.5)).unwrap();
        let shifted = complex_gamma(Complex64::new(0.5, 1.5)).unwrap();
        // Γ(z+3) = z(z+1)(z+2)Γ(z)
        let z = Complex64::new(-2.5, 1.5);
        let lhs = g * z * (z + 1.0) * (z + 2.0);
        assert!((lhs - shifted).norm() / shifted.norm() < 1e-12);
    }

    #[test]
    fn gamma_poles() {
        for n in [0.0, -1.0, -7.0] {
            assert_eq!(
                complex_gamma(Complex64::new(n, 0.0)).unwrap_err(),
                Error::PoleOfGamma(n)
            );
        }
    }

    #[test]
    fn gamma_modulus_identity() {
        let g = complex_gamma(Complex64::new(1.0, 1.0)).unwrap();
        let expected = PI / PI.sinh();
        assert!(rel(g.norm_sqr(), expected) < 1e-12);
        assert!((expected - 0.272_029_055_0).abs() < 1e-10);
    }

    #[test]
    fn order_validation() {
        assert!(BesselOrder::new(-1.0).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
        assert!(BesselOrder::new(0.0).is_ok());
    }

    #[test]
    fn i0_at_one() {
        let v = bessel_i_imag_order(BesselOrder::new(0.0).unwrap(), 1.0).unwrap();
        assert!(rel(v.re, 1.266_065_877_752_008_4) < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn negative_order_is_conjugate() {
        let p = bessel_i_signed_order(2.0, 3.0).unwrap();
        let m = bessel_i_signed_order(-2.0, 3.0).unwrap();
        assert!((p.conj() - m).norm() < 1e-14 * p.norm());
    }

    #[test]
    fn small_argument_leading_term() {
        let x = 1e-6;
        let v = bessel_i_imag_order(BesselOrder::new(1.0).unwrap(), x).unwrap();
        let lead = Complex64::new(0.5 * x, 0.0).powc(Complex64::new(0.0, 1.0))
            / complex_gamma(Complex64::new(1.0, 1.0)).unwrap();
        assert!((v - lead).norm() < 1e-11 * lead.norm());
    }

    #[test]
    fn domain_errors() {
        let o = BesselOrder::new(1.0).unwrap();
        assert!(matches!(bessel_i_imag_order(o, 0.0), Err(Error::Domain(_))));
        assert!(matches!(
            bessel_i_imag_order(o, -2.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            bessel_i_imag_order(o, 501.0),
            Err(Error::Domain(_))
        ));
        let big = BesselOrder::new(501.0).unwrap();
        assert!(matches!(
            bessel_i_imag_order(big, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cancellation_is_reported() {
        // x²/(4ν) ≈ 125: the alternating series loses every digit.
        let o = BesselOrder::new(500.0).unwrap();
        assert!(matches!(
            bessel_i_imag_order_scaled(o, 500.0),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn cross_product_identities() {
        let o = BesselOrder::new(1.5).unwrap();
        assert_eq!(bessel_cross_product(o, 1.7, 1.7).unwrap(), 0.0);
        let a = bessel_cross_product(o, 1.0, 2.0).unwrap();
        let b = bessel_cross_product(o, 2.0, 1.0).unwrap();
        assert!((a + b).abs() <= 1e-15 * a.abs());
    }

    #[test]
    fn scaled_and_unscaled_cross_agree() {
        let o = BesselOrder::new(3.0).unwrap();
        let s = bessel_cross_product(o, 0.8, 2.5).unwrap();
        let t = bessel_cross_product_scaled(o, 0.8, 2.5).unwrap();
        assert!(rel(t / gamma_one_plus_i_norm_sqr(3.0), s) < 1e-14);
    }
}
