use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use heisenberg_core::constants::*;
use heisenberg_core::Error;

/// Printed five-decimal table: (d, δ*, κ_d).
const TABLE: [(usize, f64, f64); 5] = [
    (2, 0.23734, 5.21337),
    (3, 0.121514, 2.30737),
    (4, 0.0817278, 1.47064),
    (5, 0.0615799, 1.07744),
    (6, 0.0494043, 0.849645),
];

#[test]
fn table_matches_printed_values() {
    let rows = table(&[2, 3, 4, 5, 6]).unwrap();
    for (r, &(d, ds, k)) in rows.iter().zip(&TABLE) {
        assert_eq!(r.d, d);
        assert_eq!(round_5(r.delta_star), ds);
        assert_eq!(round_5(r.kappa_d), k);
    }
    let csv = table_csv(&rows);
    assert!(csv.starts_with("d,delta_star,kappa_d\n2,2.37340e-1,5.21337e0\n"));
}

#[test]
fn gamma_examples() {
    for d in 2..8 {
        let g: f64 = gamma_delta(d, 0.0).unwrap();
        assert_abs_diff_eq!(g, (d - 1) as f64 / ((4 * d - 3) as f64).sqrt(), epsilon = 1e-14);
    }
    let ds = 0.23734;
    let g: f64 = gamma_delta(2, ds).unwrap();
    assert_abs_diff_eq!(g * g, ds / (ds + 1.0), epsilon = 1e-5);
    assert_abs_diff_eq!(g * g, 0.191823, epsilon = 1e-5);
}

#[test]
fn k_d_at_delta_star() {
    assert_abs_diff_eq!(K_d(2, 0.23734).unwrap(), 5.21337, epsilon = 1e-5);
    let ds: f64 = delta_star(3).unwrap();
    assert_abs_diff_eq!(K_d(3, ds).unwrap(), 2.0 * 2.30737, epsilon = 2e-5);
    assert!(K_d(1, 0.5).is_err());
}

#[test]
fn k_d_definitions_agree_on_grid() {
    for d in 2..=12 {
        for i in 0..20 {
            let delta = 10f64.powf(-3.0 + 5.0 * i as f64 / 19.0);
            let v = k_d_all(d, delta).unwrap();
            assert!(v.max_residual() <= 1e-9, "d={d} delta={delta}: {v:?}");
        }
    }
}

#[test]
fn kappa_definitions_agree() {
    for d in 2..=12 {
        let r = kappa_d(d).unwrap();
        assert!(r.max_residual() <= 1e-9, "{r:?}");
        assert!(r.threshold_identity_residual.abs() <= 1e-9);
    }
}

#[test]
fn kappa_exceeds_lower_bound() {
    for d in 2..=50 {
        let k = kappa_d(d).unwrap().kappa();
        assert!(k > kappa_lower_bound::<f64>(d), "d={d}");
    }
}

#[test]
fn delta_star_values() {
    assert_abs_diff_eq!(delta_star::<f64>(2).unwrap(), 0.23734, epsilon = 1e-5);
    assert_abs_diff_eq!(delta_star::<f64>(5).unwrap(), 0.0615799, epsilon = 1e-6);
}

#[test]
fn constants_in_single_precision() {
    let k: f32 = K_d(2, delta_star::<f32>(2).unwrap()).unwrap();
    assert!((k - 5.21337).abs() < 1e-3);
}

#[test]
fn k_db_reduces_and_diverges() {
    for &delta in &[0.1, 0.5, 2.0] {
        assert_abs_diff_eq!(k_db(2, delta, 0.0).unwrap(), K_d(2, delta).unwrap(), epsilon = 1e-10);
    }
    assert!(k_db(2, 0.1, 0.999).unwrap() > 100.0 * k_db(2, 0.1, 0.0).unwrap());
    assert!(k_db(2, 0.1, 1.0).is_err());
}

#[test]
fn m_db2_minimum_is_interior() {
    let m = m_db2(2, 0.5, 0.3).unwrap();
    assert!(m.gamma1 > 0.0 && m.gamma2 > 0.0 && m.gamma2 < 1.0);
    let g = |a: f64, b: f64| g_schifo(2, 0.5, 0.3, a, b);
    assert!(g(m.gamma1, 1e-6) > m.value && g(m.gamma1, 1.0 - 1e-6) > m.value);
    assert!(g(m.gamma1 * 1.01, m.gamma2) >= m.value && g(m.gamma1, m.gamma2 * 0.99) >= m.value);
}

#[test]
fn b3_bound_and_window() {
    assert_abs_diff_eq!(b3_bound(2, 0.0, 0.0).unwrap(), 2.625 + (2.625f64 * 2.625 + 1.0).sqrt(), epsilon = 1e-12);
    assert_abs_diff_eq!(b3_bound(2, 0.0, 0.0).unwrap(), 5.43402, epsilon = 1e-5);
    let a_lim: f64 = b3_bound(3, 1.0 - 1e-15, 0.0).unwrap();
    assert_abs_diff_eq!(a_lim, 1.0 / (4.0 * 2.0), epsilon = 1e-5);
    match delta_tilde_window(2, 0.0, 0.0, 0.1).unwrap() {
        Window::Interval { lower, upper } => {
            assert_abs_diff_eq!(lower, 0.1, epsilon = 1e-14);
            assert_abs_diff_eq!(upper, 20.4082, epsilon = 1e-4);
        }
        Window::Empty => panic!("window should be nonempty"),
    }
    let thr: f64 = b3_window_threshold(2, 0.0, 0.0).unwrap();
    assert!(delta_tilde_window(2, 0.0, 0.0, thr * (1.0 + 1e-9)).unwrap().is_empty());
    assert!(!delta_tilde_window(2, 0.0, 0.0, 0.999 * thr).unwrap().is_empty());
    assert!(matches!(delta_tilde_window(2, 0.0, 0.0, 0.0), Err(Error::DegenerateInput(_))));
    assert!(!delta_tilde_window(2, 0.5, 0.5, 0.1).unwrap().is_empty());
}

#[test]
fn perturbed_report_is_consistent() {
    let p = perturbed_constants(2, 0.3, 0.1, 0.1, 0.2, 0.05).unwrap();
    assert_abs_diff_eq!(p.k_db, k_db(2, 0.3, 0.1).unwrap(), epsilon = 1e-12);
    assert_eq!(p.b3_bound, b3_bound(2, 0.1, 0.2).unwrap());
    assert!(p.kappa_db.branch_gap.abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn k_d_is_minimum_of_its_objective(d in 2usize..10, ld in -3.0..2.0f64, s in 0.2..5.0f64) {
        let delta = 10f64.powf(ld);
        let k = K_d(d, delta).unwrap();
        let g: f64 = gamma_delta(d, delta).unwrap();
        prop_assert!(k_d_objective(d, delta, g * s) >= k * (1.0 - 1e-12));
    }

    #[test]
    fn kappa_db_grows_with_b(b in 0.0..0.9f64) {
        let lo = kappa_db(2, b).unwrap().value;
        let hi = kappa_db(2, b + 0.05).unwrap().value;
        prop_assert!(hi > lo);
    }
}
