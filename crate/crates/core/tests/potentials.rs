use approx::assert_abs_diff_eq;

use heisenberg_core::constants::kappa_d;
use heisenberg_core::fields::{builtin_family, Preset, Quadrature};
use heisenberg_core::potentials::*;

fn certified(b: Option<f64>) -> Bound {
    Bound { upper: b, lower: 0.0, method: BoundMethod::Analytic }
}

#[test]
fn inverse_square_bounds() {
    for d in 2..=4 {
        let c = 0.3;
        let v = PotentialSpec::power(c, -2.0);
        let b = analytic_bound(d, &v, WeightForm::ZSquaredModulus).unwrap().unwrap();
        assert_abs_diff_eq!(b, c / (d - 1) as f64, epsilon = 1e-12);
        // ∂_r(|z|V) = −c|z|⁻² ≤ 0: repulsive, b₂ = 0
        let b2 = analytic_bound(d, &v, WeightForm::RadialPositivePart).unwrap().unwrap();
        assert_eq!(b2, 0.0);
        let neg = PotentialSpec::power(-c, -2.0);
        let b1 = analytic_bound(d, &neg, WeightForm::NegativePart).unwrap().unwrap();
        assert_abs_diff_eq!(b1 * b1, c / ((d - 1) * (d - 1)) as f64, epsilon = 1e-12);
    }
}

#[test]
fn zero_potential_has_zero_bounds() {
    let b = potential_bounds(2, &PotentialSpec::zero(), None).unwrap();
    for x in [b.b, b.b1, b.b2, b.b3] {
        assert_eq!(x.upper, Some(0.0));
    }
    let r = check_thm_v1(2, &b.b).unwrap();
    assert!(r.hypothesis_met && r.certifying);
}

#[test]
fn thm_v1_decision_examples() {
    let thr = thm_v1_threshold(2).unwrap();
    assert_abs_diff_eq!(thr, 1.0 / 5.21337, epsilon = 1e-6);
    let met = check_thm_v1(2, &potential_bounds(2, &PotentialSpec::power(0.1, -2.0), None).unwrap().b).unwrap();
    assert!(met.hypothesis_met && met.certifying);
    let not = check_thm_v1(2, &potential_bounds(2, &PotentialSpec::power(0.2, -2.0), None).unwrap().b).unwrap();
    assert!(!not.hypothesis_met);
    // the decision flips exactly at 1/((d−1)κ_d)
    for d in 2..=5 {
        let t = 1.0 / ((d - 1) as f64 * kappa_d(d).unwrap().kappa());
        assert!(check_thm_v1(d, &certified(Some(t * (1.0 - 1e-9)))).unwrap().hypothesis_met);
        assert!(!check_thm_v1(d, &certified(Some(t * (1.0 + 1e-9)))).unwrap().hypothesis_met);
    }
}

#[test]
fn uncertified_bounds_do_not_certify() {
    let v = PotentialSpec::power(0.1, 1.0);
    assert_eq!(analytic_bound(2, &v, WeightForm::ZSquaredModulus).unwrap(), None);
    let b = potential_bounds(2, &v, None).unwrap();
    assert!(!check_thm_v1(2, &b.b).unwrap().certifying);
}

#[test]
fn thm_v2_examples() {
    let zero = certified(Some(0.0));
    let r = check_thm_v2(2, &zero, &zero, &zero).unwrap();
    assert!(r.hypothesis_met && r.window.is_none());
    let half = certified(Some(0.5));
    let r = check_thm_v2(2, &half, &half, &certified(Some(0.1))).unwrap();
    assert!(r.b3_bound.is_finite() && r.window_nonempty);
}

#[test]
fn repulsivity_profiles() {
    let radii: Vec<f64> = (1..=60).map(|k| 0.05 * k as f64).collect();
    let ts = [0.0, 1.0, -2.0];
    let p = radial_repulsivity_profile(&PotentialSpec::power(0.7, -1.0), &radii, &ts, 1e-8);
    assert!(p.repulsive && p.max_positive_part < 1e-13);
    let p = radial_repulsivity_profile(&PotentialSpec::power(0.7, 1.0), &radii, &ts, 1e-8);
    assert!(!p.repulsive);
    assert_abs_diff_eq!(p.max_positive_part, 2.0 * 0.7 * 3.0, epsilon = 1e-12);
    let p = radial_repulsivity_profile(&PotentialSpec::gaussian(1.0, 1.0), &radii, &ts, 1e-8);
    assert_eq!(p.sign_changes.len(), 1);
    assert!((p.sign_changes[0] - 0.5f64.sqrt()).abs() <= 0.05);
}

#[test]
fn empirical_bounds_stay_below_certified() {
    let q = Quadrature::preset(Preset::Fast, 2);
    let fam: Vec<_> = builtin_family(2, 0).into_iter().take(6).collect();
    let v = PotentialSpec::gaussian(0.1, 1.0);
    let b = potential_bounds(2, &v, Some((&fam, &q))).unwrap();
    for x in [b.b, b.b2] {
        assert!(x.lower <= x.upper.unwrap() * (1.0 + 1e-6), "{x:?}");
    }
}

#[test]
fn imaginary_part_chain_holds() {
    let q = Quadrature::preset(Preset::Fast, 2);
    let fam: Vec<_> = builtin_family(2, 1).into_iter().take(4).collect();
    let v = PotentialSpec::Power { coefficient: 0.0, imag: 0.05, exponent: -2.0 };
    for (premise, conclusion) in imaginary_part_chain(&v, 0.05, &fam, &q) {
        assert!(!premise || conclusion);
    }
}

#[test]
fn potential_json_round_trip() {
    let v = PotentialSpec::Sum { terms: vec![PotentialSpec::power(0.1, -2.0), PotentialSpec::gaussian(0.2, 2.0)] };
    let s = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<PotentialSpec>(&s).unwrap(), v);
    let parsed: PotentialSpec = serde_json::from_str(r#"{"form":"gaussian","coefficient":0.1}"#).unwrap();
    assert_eq!(parsed, PotentialSpec::gaussian(0.1, 1.0));
}
