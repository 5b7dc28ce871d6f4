use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heisenberg_core::hgroup::*;
use heisenberg_core::Error;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pt(x: &[f64], y: &[f64], t: f64) -> HPoint<f64> {
    HPoint::new(x, y, t).unwrap()
}

/// `t` as a closed-form field.
fn coord_t(d: usize) -> impl ClosedForm<f64> {
    FnField::new(d, move |_p: &[f64], _o, j: &mut Jet<f64>| {
        j.value = c(_p[2 * d]);
        if j.order >= 1 {
            j.grad[2 * d] = c(1.0);
        }
    })
}

fn coord(d: usize, a: usize) -> impl ClosedForm<f64> {
    FnField::new(d, move |p: &[f64], _o, j: &mut Jet<f64>| {
        j.value = c(p[a]);
        if j.order >= 1 {
            j.grad[a] = c(1.0);
        }
    })
}

fn z_sq(d: usize) -> impl ClosedForm<f64> {
    FnField::new(d, move |p: &[f64], _o, j: &mut Jet<f64>| {
        let n = 2 * d + 1;
        j.value = c(p[..2 * d].iter().map(|v| v * v).sum());
        if j.order >= 1 {
            for a in 0..2 * d {
                j.grad[a] = c(2.0 * p[a]);
            }
        }
        if j.order >= 2 {
            for a in 0..2 * d {
                j.hess[a * n + a] = c(2.0);
            }
        }
    })
}

fn z_pow(d: usize, k: f64) -> impl ClosedForm<f64> {
    FnField::new(d, move |p: &[f64], _o, j: &mut Jet<f64>| {
        let r2: f64 = p[..2 * d].iter().map(|v| v * v).sum();
        j.value = c(r2.powf(k / 2.0));
        if j.order >= 1 {
            for a in 0..2 * d {
                j.grad[a] = c(k * r2.powf(k / 2.0 - 1.0) * p[a]);
            }
        }
    })
}

fn random_points(d: usize, n: usize, seed: u64) -> Vec<HPoint<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let c: Vec<f64> = (0..2 * d + 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            HPoint::from_coords(d, &c).unwrap()
        })
        .collect()
}

#[test]
fn origin_is_the_identity() {
    let p = pt(&[0.3, -1.0], &[2.0, 0.5], -0.7);
    let q = group_multiply(&HPoint::origin(2), &p).unwrap();
    assert_eq!(q, p);
    let e = group_multiply(&p, &p.inverse()).unwrap();
    for &v in e.coords() {
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
    }
}

#[test]
fn group_law_is_not_commutative() {
    let a = pt(&[1.0], &[0.0], 0.0);
    let b = pt(&[0.0], &[1.0], 0.0);
    assert_eq!(group_multiply(&a, &b).unwrap().coords(), &[1.0, 1.0, -2.0]);
    assert_eq!(group_multiply(&b, &a).unwrap().coords(), &[1.0, 1.0, 2.0]);
}

#[test]
fn mismatched_dimensions_are_rejected() {
    let a = pt(&[1.0], &[0.0], 0.0);
    let b = HPoint::<f64>::origin(2);
    assert!(matches!(group_multiply(&a, &b), Err(Error::DimensionMismatch { .. })));
    assert!(HPoint::<f64>::new(&[1.0], &[], 0.0).is_err());
}

#[test]
fn koranyi_norm_values() {
    assert_eq!(koranyi_norm(&HPoint::<f64>::origin(3)), 0.0);
    assert_abs_diff_eq!(koranyi_norm(&pt(&[0.6, 0.0], &[0.0, 0.8], 0.0)), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(koranyi_norm(&pt(&[0.0], &[0.0], 4.0)), 2.0, epsilon = 1e-15);
}

#[test]
fn field_values_on_coordinates() {
    let d = 2;
    let p = pt(&[0.4, -1.1], &[0.7, 2.5], 0.3);
    for j in 0..d {
        let xt = apply_field(FieldOp::X(j), &coord_t(d), &p).unwrap();
        assert_abs_diff_eq!(xt.re, 2.0 * p.y()[j], epsilon = 1e-15);
        let xx = apply_field(FieldOp::X(j), &coord(d, j), &p).unwrap();
        let yx = apply_field(FieldOp::Y(j), &coord(d, j), &p).unwrap();
        assert_eq!((xx.re, yx.re), (1.0, 0.0));
    }
    let e1 = pt(&[1.0, 0.0], &[0.0, 0.0], 0.0);
    let x1n = apply_field(FieldOp::X(0), &KoranyiNorm { d }, &e1).unwrap();
    assert_abs_diff_eq!(x1n.re, 1.0, epsilon = 1e-15);
    assert!(apply_field(FieldOp::Y(5), &KoranyiNorm { d }, &e1).is_err());
}

#[test]
fn horizontal_gradient_of_z_squared() {
    for p in random_points(3, 20, 1) {
        let g = horizontal_gradient(&z_sq(3), &p).unwrap();
        for (k, v) in g.components().iter().enumerate() {
            assert_abs_diff_eq!(v.re, 2.0 * p.coords()[k], epsilon = 1e-14);
        }
    }
}

#[test]
fn sublaplacian_values() {
    for d in 1..=4 {
        for p in random_points(d, 10, 2) {
            assert_abs_diff_eq!(sublaplacian(&z_sq(d), &p).unwrap().re, -4.0 * d as f64, epsilon = 1e-13);
            assert_abs_diff_eq!(sublaplacian(&coord_t(d), &p).unwrap().re, 0.0, epsilon = 1e-13);
        }
    }
}

#[test]
fn koranyi_oracles_at_random_points() {
    for d in 1..=3 {
        let n = KoranyiNorm { d };
        for p in random_points(d, 1000, 10 + d as u64) {
            let g = horizontal_gradient(&n, &p).unwrap();
            let o = koranyi_gradient_oracle(&p);
            for (a, b) in g.components().iter().zip(o.components()) {
                assert!((a.re - b).abs() <= 1e-10 * b.abs().max(1.0), "gradient at {:?}", p.coords());
            }
            let gn = g.norm();
            assert!((gn - koranyi_gradient_norm_oracle(&p)).abs() <= 1e-10);
            let l = sublaplacian(&n, &p).unwrap().re;
            let lo = koranyi_sublaplacian_oracle(&p);
            assert!((l - lo).abs() <= 1e-10 * lo.abs().max(1.0), "sublaplacian {l} vs {lo}");
        }
    }
}

#[test]
fn stencil_converges_at_second_order() {
    let d = 2;
    let n = KoranyiNorm { d };
    let f = |q: &[f64]| n.value(q);
    let p = pt(&[0.7, -0.4], &[0.3, 0.9], 0.6);
    let exact_l = koranyi_sublaplacian_oracle(&p);
    let exact_g = koranyi_gradient_oracle(&p);
    let errs: Vec<(f64, f64)> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| {
            let s = Stencil::new(h);
            let l = (s.sublaplacian(&f, &p).unwrap().re - exact_l).abs();
            let g = s.horizontal_gradient(&f, &p).unwrap();
            let ge = g.components().iter().zip(exact_g.components()).map(|(a, b)| (a.re - b).abs()).fold(0.0, f64::max);
            (l, ge)
        })
        .collect();
    for w in errs.windows(2) {
        let order_l = (w[0].0 / w[1].0).log2();
        let order_g = (w[0].1 / w[1].1).log2();
        assert!(order_l >= 1.9, "sublaplacian order {order_l}");
        assert!(order_g >= 1.9, "gradient order {order_g}");
    }
}

#[test]
fn divergence_of_radial_fields() {
    for d in 2..=4 {
        for p in random_points(d, 10, 3) {
            let r = p.z_norm();
            let dd = d as f64;
            let h2 = div_horizontal(&RadialHorizontalField { d, k: 2.0 }, &p).unwrap();
            assert_abs_diff_eq!(h2, (2.0 * dd - 2.0) / (r * r), epsilon = 1e-10 * h2.abs());
            let h1 = div_horizontal(&RadialHorizontalField { d, k: 1.0 }, &p).unwrap();
            assert_abs_diff_eq!(h1, (2.0 * dd - 1.0) / r, epsilon = 1e-10 * h1.abs());
            let h0 = div_horizontal(&RadialHorizontalField { d, k: 0.0 }, &p).unwrap();
            assert_abs_diff_eq!(h0, 2.0 * dd, epsilon = 1e-12);
        }
    }
}

#[test]
fn radial_derivative_examples() {
    let d = 2;
    for p in random_points(d, 10, 4) {
        let r = p.z_norm();
        assert_abs_diff_eq!(radial_derivative(&z_pow(d, 1.0), &p, 1e-8).unwrap().re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(radial_derivative(&z_pow(d, -1.0), &p, 1e-8).unwrap().re, -1.0 / (r * r), epsilon = 1e-10);
        assert_abs_diff_eq!(radial_derivative(&coord_t(d), &p, 1e-8).unwrap().re, 0.0, epsilon = 1e-12);
    }
    let axis = pt(&[0.0, 0.0], &[0.0, 0.0], 1.0);
    assert!(matches!(radial_derivative(&z_pow(d, 1.0), &axis, 1e-8), Err(Error::SingularAxis { .. })));
}

#[test]
fn generic_scalar_f32() {
    let p = HPoint::<f32>::new(&[1.0], &[0.0], 0.0).unwrap();
    let q = HPoint::<f32>::new(&[0.0], &[1.0], 0.0).unwrap();
    assert_eq!(group_multiply(&p, &q).unwrap().coords(), &[1.0f32, 1.0, -2.0]);
    let n = koranyi_norm(&HPoint::<f32>::new(&[0.0], &[0.0], 4.0).unwrap());
    assert!((n - 2.0).abs() < 1e-6);
}

fn coords_strategy(d: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3.0..3.0f64, 2 * d + 1)
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in coords_strategy(2), b in coords_strategy(2), c in coords_strategy(2)) {
        let (a, b, c) = (HPoint::from_coords(2, &a).unwrap(), HPoint::from_coords(2, &b).unwrap(), HPoint::from_coords(2, &c).unwrap());
        let l = group_multiply(&group_multiply(&a, &b).unwrap(), &c).unwrap();
        let r = group_multiply(&a, &group_multiply(&b, &c).unwrap()).unwrap();
        for (x, y) in l.coords().iter().zip(r.coords()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn koranyi_norm_is_symmetric_and_homogeneous(a in coords_strategy(2), s in 0.1..4.0f64) {
        let p = HPoint::from_coords(2, &a).unwrap();
        let n = koranyi_norm(&p);
        prop_assert!((koranyi_norm(&p.inverse()) - n).abs() < 1e-12);
        let mut scaled: Vec<f64> = a[..4].iter().map(|v| v * s).collect();
        scaled.push(a[4] * s * s);
        let ps = HPoint::from_coords(2, &scaled).unwrap();
        prop_assert!((koranyi_norm(&ps) - s * n).abs() < 1e-10 * (1.0 + s * n));
    }

    #[test]
    fn horizontal_fields_are_left_invariant(a in coords_strategy(1), g in coords_strategy(1)) {
        // X_j(f ∘ τ_g) = (X_j f) ∘ τ_g with τ_g(p) = g·p and f = Koranyi norm
        let g = HPoint::from_coords(1, &g).unwrap();
        let p = HPoint::from_coords(1, &a).unwrap();
        let gp = group_multiply(&g, &p).unwrap();
        prop_assume!(gp.z_norm() > 1e-3);
        let n = KoranyiNorm { d: 1 };
        let shifted = |q: &[f64]| {
            let qp = HPoint::from_coords(1, q).unwrap();
            n.value(group_multiply(&g, &qp).unwrap().coords())
        };
        let s = Stencil::new(1e-5);
        for op in [FieldOp::X(0), FieldOp::Y(0)] {
            let lhs = s.apply_field(op, &shifted, &p).unwrap().re;
            let rhs = apply_field(op, &n, &gp).unwrap().re;
            prop_assert!((lhs - rhs).abs() < 1e-6, "{:?}: {} vs {}", op, lhs, rhs);
        }
    }
}
