use num_complex::Complex64;
use proptest::prelude::*;
use rindler_purcell::detector::{
    decay_probability_accelerated, sinc, DetectorConfig, Placement, Truncation,
};
use rindler_purcell::specfun::{
    bessel_cross_product, bessel_i_imag_order, bessel_i_imag_order_scaled, complex_gamma,
    BesselOrder,
};
use rindler_purcell::sweep::local_maxima;
use rindler_purcell::{CavityGeometry, RindlerGeometry};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rest_probability_scales_with_coupling_squared(
        m in 0.0..5.0f64, x in -0.45..0.45f64, tau in 0.0..80.0f64, eps in 1e-3..2.0f64, c in 0.1..10.0f64, n in 1usize..6
    ) {
        let g = CavityGeometry::new(1.0, m).unwrap();
        let p = |e: f64| {
            let det = DetectorConfig::resonant(&g, n, Placement::Offset(x), tau, e).unwrap();
            g.decay_probability_rest(&det, Truncation::with_k_max(12)).unwrap().probability
        };
        let (p1, p2) = (p(eps), p(c * eps));
        prop_assert!(p1 >= 0.0 && p1.is_finite());
        prop_assert!((p2 - c * c * p1).abs() <= 1e-12 * c * c * p1 + f64::MIN_POSITIVE);
    }

    #[test]
    fn gamma_recurrence(re in -6.5..8.0f64, im in -6.0..6.0f64) {
        let z = Complex64::new(re, im);
        prop_assume!(z.im.abs() > 1e-3 || (z.re - z.re.round()).abs() > 1e-3);
        let lhs = complex_gamma(z + 1.0).unwrap();
        let rhs = z * complex_gamma(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm());
    }

    #[test]
    fn scaled_and_unscaled_agree(nu in 0.0..20.0f64, x in 0.05..20.0f64) {
        let order = BesselOrder::new(nu).unwrap();
        let scaled = bessel_i_imag_order_scaled(order, x).unwrap();
        let g = complex_gamma(Complex64::new(1.0, nu)).unwrap();
        let unscaled = bessel_i_imag_order(order, x).unwrap();
        prop_assert!((g * unscaled - scaled).norm() <= 1e-10 * scaled.norm());
    }

    #[test]
    fn cross_product_antisymmetric(nu in 0.0..15.0f64, u in 0.1..15.0f64, v in 0.1..15.0f64) {
        let order = BesselOrder::new(nu).unwrap();
        let s_uv = bessel_cross_product(order, u, v).unwrap();
        let s_vu = bessel_cross_product(order, v, u).unwrap();
        let scale = bessel_i_imag_order(order, u).unwrap().norm() * bessel_i_imag_order(order, v).unwrap().norm();
        prop_assert!((s_uv + s_vu).abs() <= 1e-10 * scale);
        prop_assert_eq!(bessel_cross_product(order, u, u).unwrap(), 0.0);
    }

    #[test]
    fn cross_product_is_imaginary_part(nu in 0.0..10.0f64, u in 0.1..10.0f64, v in 0.1..10.0f64) {
        let order = BesselOrder::new(nu).unwrap();
        let (iu, iv) = (bessel_i_imag_order(order, u).unwrap(), bessel_i_imag_order(order, v).unwrap());
        let direct = (iu * iv.conj()).im;
        let s = bessel_cross_product(order, u, v).unwrap();
        prop_assert!((s - direct).abs() <= 1e-9 * iu.norm() * iv.norm());
    }

    #[test]
    fn sinc_bounded(x in -1e3..1e3f64) {
        prop_assert!(sinc(x).abs() <= 1.0);
    }

    #[test]
    fn maxima_are_strict_peaks(values in prop::collection::vec(0u8..6, 0..40)) {
        let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
        let a: Vec<f64> = (0..v.len()).map(|i| i as f64).collect();
        for (ai, p) in local_maxima(&a, &v) {
            let i = ai as usize;
            prop_assert!(i > 0 && v[i - 1] < p);
            let next = v[i..].iter().find(|&&x| x != p).copied();
            prop_assert!(next.is_some_and(|x| x < p));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn spectrum_ordered_and_inside_windows(m in 0.1..6.0f64, a in 0.02..1.95f64) {
        let g = RindlerGeometry::new(CavityGeometry::new(1.0, m).unwrap(), a).unwrap();
        let modes = g.modes(6).unwrap();
        for (i, mode) in modes.iter().enumerate() {
            let (lo, hi) = g.frequency_window(i + 1);
            prop_assert!(mode.omega() >= lo * (1.0 - 1e-12) && mode.omega() <= hi * (1.0 + 1e-12));
            prop_assert_eq!(g.mode_value_at_offset(mode, 0.5).unwrap(), 0.0);
            prop_assert!(g.mode_value_at_offset(mode, -0.5).unwrap().abs() < 1e-8);
        }
        prop_assert!(modes.windows(2).all(|w| w[1].omega() > w[0].omega()));
    }

    #[test]
    fn accelerated_probability_non_negative(m in 0.0..4.0f64, a in 0.02..1.9f64, tau in 0.0..60.0f64, j in 1usize..3) {
        let base = CavityGeometry::new(1.0, m).unwrap();
        let g = RindlerGeometry::new(base, a).unwrap();
        let modes = g.modes(10).unwrap();
        let det = DetectorConfig::resonant(&base, 3, Placement::node(3, j).unwrap(), tau, 1.0).unwrap();
        let p = decay_probability_accelerated(&g, &modes, &det, Truncation::with_k_max(10)).unwrap();
        prop_assert!(p.probability.is_finite() && p.probability >= 0.0);
        prop_assert!(p.terms.iter().all(|t| t.term >= 0.0));
    }
}
