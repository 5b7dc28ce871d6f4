use approx::assert_abs_diff_eq;
use num_complex::Complex64;

use heisenberg_core::fields::{builtin_family, gaussian, Preset, Quadrature};
use heisenberg_core::hardy::*;
use heisenberg_core::hgroup::RadialHorizontalField;
use heisenberg_core::Error;

#[test]
fn constants_and_dimensions() {
    assert_eq!(homogeneous_dimension(3), 8);
    assert_abs_diff_eq!(HardySpec::new(HardyKind::GarofaloLanconelli, 2).unwrap().constant, 0.25);
    assert_abs_diff_eq!(HardySpec::new(HardyKind::Horizontal, 3).unwrap().constant, 0.25);
    assert_abs_diff_eq!(HardySpec::new(HardyKind::WeightedHorizontal, 2).unwrap().constant, 4.0 / 9.0);
    assert!(matches!(HardySpec::new(HardyKind::Horizontal, 1), Err(Error::Domain(_))));
    assert_eq!(HardySpec::all_quotients(1).len(), 2);
    assert!(HardySpec::general(2, 5.0).is_err());
}

#[test]
fn family_quotients_below_constants() {
    let q = Quadrature::preset(Preset::Standard, 2);
    let v = hardy_suite(2, 7, 12, &q);
    assert_eq!(v.len(), 36);
    for x in &v {
        assert!(x.pass, "{x:?}");
        assert!(x.quotient < x.constant, "{}: {} ≥ {}", x.member, x.quotient, x.constant);
    }
}

#[test]
fn quotient_is_scale_invariant() {
    let q = Quadrature::preset(Preset::Standard, 2);
    let f = &builtin_family(2, 3)[5];
    for spec in HardySpec::all_quotients(2) {
        let a = quotient(&spec, f, &q).unwrap().value;
        let b = quotient(&spec, &f.scaled(Complex64::new(3.0, -4.0)), &q).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a);
    }
}

#[test]
fn general_form_reproduces_named_inequalities() {
    let q = Quadrature::preset(Preset::Standard, 2);
    for f in builtin_family(2, 3).iter().take(3) {
        let g = verify_general(&RadialHorizontalField { d: 2, k: 2.0 }, f, 2.0, &q).unwrap();
        let h = verify(&HardySpec::new(HardyKind::Horizontal, 2).unwrap(), f, &q).unwrap();
        // div_H h = 2(d−1)/|z|² so both sides carry the factor 2(d−1)
        assert_abs_diff_eq!(g.lhs / 2.0, h.lhs, epsilon = 1e-10 * h.lhs);
        assert_abs_diff_eq!(g.rhs / 2.0, h.rhs, epsilon = 1e-10 * h.rhs);
        let g = verify_general(&RadialHorizontalField { d: 2, k: 1.0 }, f, 2.0, &q).unwrap();
        let w = verify(&HardySpec::new(HardyKind::WeightedHorizontal, 2).unwrap(), f, &q).unwrap();
        assert_abs_diff_eq!(g.lhs / 3.0, w.lhs, epsilon = 1e-10 * w.lhs);
        assert_abs_diff_eq!(g.rhs / 3.0, w.rhs, epsilon = 1e-10 * w.rhs);
        assert!(g.pass);
    }
}

#[test]
fn general_form_rejects_nonpositive_divergence() {
    let q = Quadrature::preset(Preset::Fast, 2);
    let f = gaussian(2, 1.0, 1.0);
    // (x, y)|z|⁻⁵ has div_H = (2d − 5)/|z|⁵ < 0 at d = 2
    let r = verify_general(&RadialHorizontalField { d: 2, k: 5.0 }, &f, 2.0, &q);
    assert!(matches!(r, Err(Error::HypothesisViolation(_))));
}

#[test]
fn profile_closed_form_matches_quadrature() {
    let q = Quadrature::preset(Preset::Standard, 2);
    for kind in [HardyKind::Horizontal, HardyKind::WeightedHorizontal] {
        let s = HardySpec::new(kind, 2).unwrap();
        let f = radial_profile(2, 0.5, 1.0, 0.7);
        let a = quotient(&s, &f, &q).unwrap().value;
        let b = radial_profile_quotient(kind, 2, 0.5, 1.0, 0.7).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-8 * b);
    }
}

#[test]
fn sharpness_sweep_approaches_constant() {
    let q = Quadrature::preset(Preset::Standard, 2);
    let spec = HardySpec::new(HardyKind::Horizontal, 2).unwrap();
    let (eps, rates) = default_sweep();
    let rep = sharpness_probe(&spec, &eps, &rates, &q).unwrap();
    assert!(rep.best >= 0.8 && rep.best < 1.0, "best {}", rep.best);
    assert_abs_diff_eq!(rep.gap, 1.0 - rep.best, epsilon = 1e-15);
    // monotone increase as ε shrinks, per rate
    for (a, b) in rates {
        let qs: Vec<f64> = rep.points.iter().filter(|p| p.a == a && p.b == b).map(|p| p.quotient).collect();
        assert!(qs.windows(2).all(|w| w[1] >= w[0]), "{qs:?}");
    }
}

#[test]
fn single_gaussian_has_a_gap() {
    let q = Quadrature::preset(Preset::Standard, 3);
    for v in verify_member(&gaussian(3, 1.0, 1.0), &q) {
        assert!(v.margin > 0.0 && v.quotient < v.constant);
    }
}

#[test]
fn verdict_json_uses_member_id() {
    let q = Quadrature::preset(Preset::Fast, 2);
    let v = verify(&HardySpec::new(HardyKind::GarofaloLanconelli, 2).unwrap(), &gaussian(2, 1.0, 1.0), &q).unwrap();
    let j = serde_json::to_value(&v).unwrap();
    assert!(j.get("member-id").is_some());
}
