//! Closed-form test fields, quadrature over ℝ^{2d+1}, weighted norms and the
//! gauge transform `u^±`.

mod family;
mod field;
mod poly;
mod quadrature;
mod spectral;

pub use family::{builtin_family, gaussian, normalized_gaussian};
pub use field::{Decay, GaugeField, PolyExp, RadialProduct, SumField, TestField};
pub use poly::{PolyJet, Polynomial};
pub use quadrature::{sphere_rule, Estimate, Preset, Quadrature, Scheme};
pub use spectral::{gauge_transform, ConeConvention, ConeSide, GaugeSign, SpectralParam};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hgroup::{ClosedForm, Jet};

/// Multiplicative weight `w` in `‖w f‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "power", rename_all = "snake_case")]
pub enum Weight {
    One,
    /// `|z|^p`
    Z(f64),
    /// `|(z,t)|_H^p`
    Koranyi(f64),
}

impl Weight {
    pub fn eval(&self, d: usize, p: &[f64], r: f64) -> f64 {
        match *self {
            Weight::One => 1.0,
            Weight::Z(k) => r.powf(k),
            Weight::Koranyi(k) => {
                let t = p[2 * d];
                (r.powi(4) + t * t).powf(k / 4.0)
            }
        }
    }
}

/// `(∫ w² |f|²)^{1/2}` with error `|fine − coarse|`; fails with
/// [`Error::Accuracy`] when the two levels differ by more than `q.rel_tol`.
pub fn weighted_l2_norm(f: &TestField, w: Weight, q: &Quadrature) -> Result<Estimate> {
    let d = f.dim();
    let mut jet = Jet::new(d);
    let (fine, coarse) = q.integrate_levels(d, &f.decay, 1, |p, r, out| {
        f.jet_into(p, 0, &mut jet);
        let wv = w.eval(d, p, r);
        out[0] = wv * wv * jet.value.norm_sqr();
    });
    let (a, b) = (fine[0].max(0.0).sqrt(), coarse[0].max(0.0).sqrt());
    let err = (a - b).abs();
    if err > q.rel_tol * a.max(f64::MIN_POSITIVE) {
        return Err(Error::Accuracy { coarse: b, fine: a });
    }
    Ok(Estimate { value: a, error: err })
}

/// `‖∇_H f‖` with error estimate.
pub fn horizontal_gradient_norm(f: &TestField, w: Weight, q: &Quadrature) -> Result<Estimate> {
    let d = f.dim();
    let mut jet = Jet::new(d);
    let mut g = vec![Complex64::new(0.0, 0.0); 2 * d];
    let (fine, coarse) = q.integrate_levels(d, &f.decay, 1, |p, r, out| {
        f.jet_into(p, 1, &mut jet);
        jet.horizontal_into(p, &mut g);
        let wv = w.eval(d, p, r);
        out[0] = wv * wv * g.iter().map(|c| c.norm_sqr()).sum::<f64>();
    });
    let (a, b) = (fine[0].max(0.0).sqrt(), coarse[0].max(0.0).sqrt());
    let err = (a - b).abs();
    if err > q.rel_tol * a.max(f64::MIN_POSITIVE) {
        return Err(Error::Accuracy { coarse: b, fine: a });
    }
    Ok(Estimate { value: a, error: err })
}

/// Largest relative discrepancy between the exact gradient of `f` and central
/// differences (step `h`) at the given points.
pub fn gradient_fd_error(f: &dyn ClosedForm<f64>, points: &[Vec<f64>], h: f64) -> f64 {
    let d = f.dim();
    let n = 2 * d + 1;
    let mut worst: f64 = 0.0;
    for p in points {
        let jet = f.jet(p, 1);
        let scale = jet.grad.iter().map(|g| g.norm()).fold(jet.value.norm(), f64::max).max(1e-300);
        let mut q = p.clone();
        for a in 0..n {
            q[a] = p[a] + h;
            let fp = f.value(&q);
            q[a] = p[a] - h;
            let fm = f.value(&q);
            q[a] = p[a];
            let fd = (fp - fm) / (2.0 * h);
            worst = worst.max((fd - jet.grad[a]).norm() / scale);
        }
    }
    worst
}

/// `⟨∇_H f, ∇_H g⟩` and `⟨𝓛f, g⟩` (inner products antilinear in the first slot).
pub fn integration_by_parts_pair(f: &TestField, g: &TestField, q: &Quadrature) -> (Complex64, Complex64) {
    let d = f.dim();
    let decay = f.decay.merge(&g.decay);
    let (mut jf, mut jg) = (Jet::new(d), Jet::new(d));
    let (mut hf, mut hg) = (vec![Complex64::new(0.0, 0.0); 2 * d], vec![Complex64::new(0.0, 0.0); 2 * d]);
    let v = q.integrate(d, &decay, 4, |p, _, out| {
        f.jet_into(p, 2, &mut jf);
        g.jet_into(p, 1, &mut jg);
        jf.horizontal_into(p, &mut hf);
        jg.horizontal_into(p, &mut hg);
        let a: Complex64 = hf.iter().zip(&hg).map(|(x, y)| x.conj() * y).sum();
        let b = jf.sublaplacian(p).conj() * jg.value;
        out[0] = a.re;
        out[1] = a.im;
        out[2] = b.re;
        out[3] = b.im;
    });
    (Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
}
