use num_complex::Complex64;

use heisenberg_core::fields::{gaussian, Preset, Quadrature, SpectralParam};
use heisenberg_core::hgroup::ClosedForm;
use heisenberg_core::resolvent::*;

fn energy(op: &DiscreteOperator, u: &[Complex64]) -> f64 {
    let lu = op.sublaplacian(u);
    u.iter().zip(&lu).map(|(a, b)| (a.conj() * b).re).sum::<f64>() * op.grid.cell_volume()
}

#[test]
fn solver_recovers_manufactured_solution() {
    let u = gaussian(2, 1.0, 1.0);
    let grid = DiscreteGrid::cube(8).unwrap();
    for s in [SpectralParam::new(1.0, 0.5), SpectralParam::new(-1.0, 1.0)] {
        let op = DiscreteOperator::new(grid, s);
        let exact = grid.sample(|p| u.value(p));
        let f = op.apply(&exact);
        let sol = discrete_solve(&op, &f, 4000).unwrap();
        assert!(sol.residual <= DISCRETE_TOL);
        let err: f64 = sol.u.iter().zip(&exact).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let scale: f64 = exact.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        assert!(err <= 1e-6 * scale, "{s}: {err:e}");
    }
}

#[test]
fn discrete_operator_is_positive_and_symmetric() {
    let grid = DiscreteGrid::new(6, 6, 2.5, 3.0).unwrap();
    let op = DiscreteOperator::new(grid, SpectralParam::new(0.0, 0.0));
    let a = grid.sample(|p| Complex64::new((p[0] + 0.3 * p[4]).sin(), p[2].cos() * (-p[3] * p[3]).exp()));
    let b = grid.sample(|p| Complex64::new((-p[1] * p[1]).exp(), (p[4] * 0.7).cos() * p[0]));
    let ab: Complex64 = a.iter().zip(op.sublaplacian(&b)).map(|(x, y)| x * y).sum();
    let ba: Complex64 = b.iter().zip(op.sublaplacian(&a)).map(|(x, y)| x * y).sum();
    assert!((ab - ba).norm() <= 1e-10 * ab.norm());
    assert!(energy(&op, &a) > 0.0);
    assert!(DiscreteGrid::cube(7).is_err());
}

fn energy_error(n: usize, exact: f64) -> f64 {
    let u = gaussian(2, 1.0, 1.0);
    let grid = DiscreteGrid::new(n, n, 3.5, 3.5).unwrap();
    let op = DiscreteOperator::new(grid, SpectralParam::new(0.0, 0.0));
    (energy(&op, &grid.sample(|p| u.value(p))) - exact).abs() / exact
}

#[test]
fn gradient_energy_converges_under_refinement() {
    let u = gaussian(2, 1.0, 1.0);
    let q = Quadrature::preset(Preset::Standard, 2);
    let exact = compute_moments(&u, None, &q).fine.g;
    let errs: Vec<f64> = [8, 10, 12].iter().map(|&n| energy_error(n, exact)).collect();
    eprintln!("relative energy errors: {errs:?}");
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn gradient_energy_at_sixteen_nodes() {
    let u = gaussian(2, 1.0, 1.0);
    let q = Quadrature::preset(Preset::Standard, 2);
    let exact = compute_moments(&u, None, &q).fine.g;
    assert!(energy_error(16, exact) < energy_error(12, exact));
}

#[test]
fn discrete_verdicts_carry_the_disclaimer() {
    let u = gaussian(2, 1.0, 1.0);
    let s = SpectralParam::new(1.0, 0.5);
    let c = FreeConstants::new(2, 1.0).unwrap();
    let f = |p: &[f64]| u.value(p);
    let r = discrete_thm1(DiscreteGrid::cube(6).unwrap(), s, f, &c, "gauss").unwrap();
    assert_eq!(r.disclaimer, DISCRETE_DISCLAIMER);
    assert!(r.residual <= DISCRETE_TOL && !r.verdicts.is_empty());
    assert!(discrete_thm1(DiscreteGrid::cube(6).unwrap(), s, f, &FreeConstants::new(3, 1.0).unwrap(), "g").is_err());
}
