use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Decay, PolyExp, SumField, TestField};
use super::poly::Polynomial;

const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

fn coord(d: usize, a: usize) -> Polynomial {
    Polynomial::coordinate(2 * d + 1, a)
}

/// `z_j = x_j + i y_j` (0-based `j`).
fn zj(d: usize, j: usize) -> Polynomial {
    coord(d, j).add(&coord(d, d + j).scale(CI))
}

fn cplx(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random complex polynomial of degree ≤ `deg` in a few coordinates (always
/// including `x_1`, `y_1`, `t` and, for `d ≥ 2`, the second pair).
fn random_poly(d: usize, deg: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let n = 2 * d + 1;
    let mut vars = vec![0, d, 2 * d];
    if d >= 2 {
        vars.push(1);
        vars.push(d + 1);
    }
    let mut p = Polynomial::constant(n, cplx(rng) + C1);
    for &a in &vars {
        p = p.add(&coord(d, a).scale(cplx(rng)));
    }
    if deg >= 2 {
        for (k, &a) in vars.iter().enumerate() {
            for &b in &vars[k..] {
                if rng.gen_bool(0.5) {
                    p = p.add(&coord(d, a).mul(&coord(d, b)).scale(cplx(rng) * 0.5));
                }
            }
        }
    }
    p
}

fn gaussian_member(id: String, d: usize, p: Polynomial, a: f64, b: f64) -> TestField {
    let deg = p.degree();
    TestField::new(id, Arc::new(PolyExp::gaussian(d, p, a, b)), Decay::gaussian(a, b, deg))
}

/// Unit-mass Gaussian `(a/π)^d (b/π)^{1/2} e^{−a|z|² − bt²}`.
pub fn normalized_gaussian(d: usize, a: f64, b: f64) -> TestField {
    let pi = std::f64::consts::PI;
    let c = (a / pi).powi(d as i32) * (b / pi).sqrt();
    gaussian_member(
        format!("normalized-gaussian(a={a},b={b})"),
        d,
        Polynomial::constant(2 * d + 1, Complex64::new(c, 0.0)),
        a,
        b,
    )
}

/// The plain Gaussian `e^{−a|z|² − bt²}`.
pub fn gaussian(d: usize, a: f64, b: f64) -> TestField {
    gaussian_member(format!("gaussian(a={a},b={b})"), d, Polynomial::constant(2 * d + 1, C1), a, b)
}

/// Deterministic family of 24 closed-form test fields for dimension `d`.
///
/// Members: the anchor Gaussian (`a = b = 1`), Gaussians with random rates,
/// random complex polynomial × Gaussian, members vanishing on the axis
/// (factor `|z|²` or `x_1 + iy_1`), super-Gaussian plateaus `e^{−a|z|⁴ − bt²}`
/// and complex sums of Gaussians with different rates.
pub fn builtin_family(d: usize, seed: u64) -> Vec<TestField> {
    assert!(d >= 1);
    let n = 2 * d + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4845_4953_454e_4247);
    let mut out = Vec::with_capacity(24);
    let rates = |rng: &mut ChaCha8Rng| (rng.gen_range(0.6..1.6), rng.gen_range(0.5..1.5));

    out.push(gaussian_member(format!("s{seed}-00-anchor"), d, Polynomial::constant(n, C1), 1.0, 1.0));
    for k in 1..4 {
        let (a, b) = rates(&mut rng);
        let c = cplx(&mut rng) + C1;
        out.push(gaussian_member(
            format!("s{seed}-{k:02}-gaussian"),
            d,
            Polynomial::constant(n, c),
            a,
            b,
        ));
    }
    for k in 4..8 {
        let (a, b) = rates(&mut rng);
        let p = random_poly(d, 1, &mut rng);
        out.push(gaussian_member(format!("s{seed}-{k:02}-linear"), d, p, a, b));
    }
    for k in 8..12 {
        let (a, b) = rates(&mut rng);
        let p = random_poly(d, 2, &mut rng);
        out.push(gaussian_member(format!("s{seed}-{k:02}-quadratic"), d, p, a, b));
    }
    for k in 12..16 {
        let (a, b) = rates(&mut rng);
        let p = Polynomial::z_norm_sqr(n).mul(&random_poly(d, 1, &mut rng));
        let mut f = gaussian_member(format!("s{seed}-{k:02}-axis-zsq"), d, p, a, b);
        f.vanishes_on_axis = true;
        out.push(f);
    }
    for k in 16..20 {
        let (a, b) = rates(&mut rng);
        let p = zj(d, 0).mul(&random_poly(d, 1, &mut rng));
        let mut f = gaussian_member(format!("s{seed}-{k:02}-axis-z1"), d, p, a, b);
        f.vanishes_on_axis = true;
        out.push(f);
    }
    for k in 20..22 {
        let (a, b) = rates(&mut rng);
        let r2 = Polynomial::z_norm_sqr(n);
        let mut te = vec![0; n];
        te[2 * d] = 2;
        let q = r2
            .mul(&r2)
            .scale(Complex64::new(-a * 0.5, 0.0))
            .add(&Polynomial::monomial(Complex64::new(-b, 0.0), te));
        let p = Polynomial::constant(n, cplx(&mut rng) + C1);
        // e^{-a r⁴/2}: |f|² ≤ e^{-42} once a r⁴ ≥ 42
        let decay = Decay {
            a: 0.0,
            b,
            r_extent: (48.0 / a).powf(0.25),
            t_extent: Decay::gaussian(1.0, b, 0).t_extent,
        };
        out.push(TestField::new(
            format!("s{seed}-{k:02}-plateau"),
            Arc::new(PolyExp::new(d, p, q)),
            decay,
        ));
    }
    for k in 22..24 {
        let (a1, b1) = rates(&mut rng);
        let (a2, b2) = (a1 * 2.0, b1 * 0.7);
        let p1 = random_poly(d, 1, &mut rng);
        let p2 = random_poly(d, 1, &mut rng);
        let f1 = PolyExp::gaussian(d, p1, a1, b1);
        let f2 = PolyExp::gaussian(d, p2, a2, b2);
        let decay = Decay::gaussian(a1, b1, 1).merge(&Decay::gaussian(a2, b2, 1));
        out.push(TestField::new(
            format!("s{seed}-{k:02}-two-scale"),
            Arc::new(SumField {
                d,
                parts: vec![(C1, Arc::new(f1)), (cplx(&mut rng), Arc::new(f2))],
            }),
            decay,
        ));
    }
    out
}
