use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use heisenberg_core::fields::*;
use heisenberg_core::hgroup::ClosedForm;

#[test]
fn gaussian_norm_matches_closed_form() {
    for d in 1..=3 {
        let (a, b) = (1.3, 0.7);
        let q = Quadrature::preset(if d < 3 { Preset::Standard } else { Preset::Thorough }, d);
        let f = normalized_gaussian(d, a, b);
        let c = (a / PI).powi(d as i32) * (b / PI).sqrt();
        let exact = (c * c * (PI / (2.0 * a)).powi(d as i32) * (PI / (2.0 * b)).sqrt()).sqrt();
        let n = weighted_l2_norm(&f, Weight::One, &q).unwrap();
        assert!((n.value - exact).abs() <= 1e-9 * exact, "d={d}: {} vs {exact}", n.value);
    }
}

#[test]
fn norm_is_homogeneous() {
    let q = Quadrature::preset(Preset::Standard, 2);
    let f = gaussian(2, 1.0, 1.0);
    let base = weighted_l2_norm(&f, Weight::Z(1.0), &q).unwrap().value;
    let c = Complex64::new(-2.0, 1.5);
    let scaled = weighted_l2_norm(&f.scaled(c), Weight::Z(1.0), &q).unwrap().value;
    assert_abs_diff_eq!(scaled, c.norm() * base, epsilon = 1e-12 * scaled);
}

#[test]
fn singular_weight_on_axis_vanishing_member() {
    let family = builtin_family(2, 0);
    let f = family.iter().find(|m| m.vanishes_on_axis).expect("an axis-vanishing member");
    let mut q = Quadrature::preset(Preset::Standard, 2);
    let a = weighted_l2_norm(f, Weight::Z(-1.0), &q).unwrap().value;
    q.eps_axis *= 0.5;
    let b = weighted_l2_norm(f, Weight::Z(-1.0), &q).unwrap().value;
    assert!(a.is_finite() && (a - b).abs() <= 1e-9 * a);
}

#[test]
fn integration_by_parts_on_family() {
    let q = Quadrature::preset(Preset::Standard, 2);
    let fam = builtin_family(2, 5);
    for w in fam.windows(2).take(6) {
        let (g, l) = integration_by_parts_pair(&w[0], &w[1], &q);
        assert!((g - l).norm() <= 1e-8 * g.norm().max(1e-12), "{}: {g} vs {l}", w[0].id);
    }
}

#[test]
fn family_is_deterministic_and_exact() {
    let a = builtin_family(3, 11);
    let b = builtin_family(3, 11);
    assert_eq!(a.len(), 24);
    let pts: Vec<Vec<f64>> = (0..5).map(|k| (0..7).map(|i| ((k * 7 + i) as f64 * 0.37).sin()).collect()).collect();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.id, y.id);
        assert_eq!(x.value(&pts[0]), y.value(&pts[0]));
        assert!(gradient_fd_error(x, &pts, 1e-5) < 1e-7, "{}", x.id);
    }
    assert_ne!(builtin_family(3, 12)[1].value(&pts[0]), a[1].value(&pts[0]));
}

#[test]
fn gauge_transform_examples() {
    let u = gaussian(2, 1.0, 1.0);
    let p = [0.3, -0.4, 0.0, 0.0, 0.2];
    let same = gauge_transform(&u, &SpectralParam::new(0.0, 2.0), GaugeSign::Minus);
    assert_abs_diff_eq!((same.value(&p) - u.value(&p)).norm(), 0.0, epsilon = 1e-15);
    let m = gauge_transform(&u, &SpectralParam::new(1.0, 0.0), GaugeSign::Minus);
    let phase = m.value(&p) / u.value(&p);
    assert_abs_diff_eq!((phase - Complex64::new(0.0, -0.5).exp()).norm(), 0.0, epsilon = 1e-14);
    let neg = gauge_transform(&u, &SpectralParam::new(4.0, -1.0), GaugeSign::Plus);
    let phase = neg.value(&p) / u.value(&p);
    assert_abs_diff_eq!((phase - Complex64::new(0.0, -1.0).exp()).norm(), 0.0, epsilon = 1e-14);
}

#[test]
fn cone_classification() {
    let s = SpectralParam::new(-1.0, 0.5);
    assert_eq!(s.classify(1.0, ConeConvention::AbsLambda1), ConeSide::Inside);
    assert_eq!(s.classify(1.0, ConeConvention::SignedLambda1), ConeSide::Outside);
    assert_eq!(SpectralParam::new(2.0, 1.0).classify(0.5, ConeConvention::AbsLambda1), ConeSide::Boundary);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gauge_preserves_modulus(l1 in -3.0..3.0f64, l2 in -3.0..3.0f64, x in -2.0..2.0f64, t in -2.0..2.0f64) {
        let u = gaussian(1, 1.0, 1.0);
        let s = SpectralParam::new(l1, l2);
        let p = [x, 0.5, t];
        for sign in [GaugeSign::Plus, GaugeSign::Minus] {
            let v = gauge_transform(&u, &s, sign);
            prop_assert!((v.value(&p).norm() - u.value(&p).norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn lambda_display_round_trips(l1 in -10.0..10.0f64, l2 in -10.0..10.0f64) {
        let s = SpectralParam::new(l1, l2);
        let back: SpectralParam = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }
}
