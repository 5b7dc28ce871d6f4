use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{PolyJet, Polynomial};
use crate::hgroup::{ClosedForm, Jet};

/// Where a field is negligible: Gaussian-type rates and truncation extents
/// (`|f|²` and its derivatives are below ~1e−17 of their peak beyond them).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decay {
    pub a: f64,
    pub b: f64,
    pub r_extent: f64,
    pub t_extent: f64,
}

impl Decay {
    /// Extents for `|P|² e^{−2a|z|² − 2bt²}` with `deg P ≤ degree`.
    pub fn gaussian(a: f64, b: f64, degree: usize) -> Self {
        let budget = 42.0 + 3.0 * degree as f64;
        Self {
            a,
            b,
            r_extent: (budget / (2.0 * a)).sqrt(),
            t_extent: (budget / (2.0 * b)).sqrt(),
        }
    }

    pub fn merge(&self, other: &Decay) -> Decay {
        Decay {
            a: self.a.min(other.a),
            b: self.b.min(other.b),
            r_extent: self.r_extent.max(other.r_extent),
            t_extent: self.t_extent.max(other.t_extent),
        }
    }
}

thread_local! {
    static SCRATCH: RefCell<(PolyJet, PolyJet, Vec<f64>)> =
        RefCell::new((PolyJet::new(0), PolyJet::new(0), Vec::new()));
}

/// `P · exp(Q)` with `P` complex and `Q` real polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyExp {
    pub d: usize,
    pub p: Polynomial,
    pub q: Polynomial,
}

impl PolyExp {
    pub fn new(d: usize, p: Polynomial, q: Polynomial) -> Self {
        assert_eq!(p.n, 2 * d + 1);
        assert_eq!(q.n, 2 * d + 1);
        assert!(q.terms.iter().all(|(c, _)| c.im == 0.0), "exponent must be real");
        Self { d, p, q }
    }

    /// `P · exp(−a|z|² − b t²)`.
    pub fn gaussian(d: usize, p: Polynomial, a: f64, b: f64) -> Self {
        let n = 2 * d + 1;
        let mut q = Polynomial::z_norm_sqr(n).scale(Complex64::new(-a, 0.0));
        let mut e = vec![0; n];
        e[2 * d] = 2;
        q.terms.push((Complex64::new(-b, 0.0), e));
        Self::new(d, p, q)
    }
}

impl ClosedForm<f64> for PolyExp {
    fn dim(&self) -> usize {
        self.d
    }

    fn jet_into(&self, x: &[f64], order: u8, jet: &mut Jet<f64>) {
        let n = 2 * self.d + 1;
        jet.clear(order);
        SCRATCH.with(|s| {
            let (pj, qj, pw) = &mut *s.borrow_mut();
            if pj.grad.len() < n {
                *pj = PolyJet::new(n);
                *qj = PolyJet::new(n);
            }
            self.p.jet_into(x, order, pj, pw);
            self.q.jet_into(x, order, qj, pw);
            let e = qj.value.re.exp();
            jet.value = pj.value * e;
            if order == 0 {
                return;
            }
            for a in 0..n {
                jet.grad[a] = (pj.grad[a] + pj.value * qj.grad[a].re) * e;
            }
            if order < 2 {
                return;
            }
            for a in 0..n {
                for b in 0..n {
                    let (qa, qb) = (qj.grad[a].re, qj.grad[b].re);
                    jet.hess[a * n + b] = (pj.hess[a * n + b]
                        + pj.grad[a] * qb
                        + pj.grad[b] * qa
                        + pj.value * (qj.hess[a * n + b].re + qa * qb))
                        * e;
                }
            }
        });
    }
}

/// Complex linear combination of closed-form fields.
#[derive(Clone)]
pub struct SumField {
    pub d: usize,
    pub parts: Vec<(Complex64, Arc<dyn ClosedForm<f64>>)>,
}

impl ClosedForm<f64> for SumField {
    fn dim(&self) -> usize {
        self.d
    }
    fn jet_into(&self, x: &[f64], order: u8, jet: &mut Jet<f64>) {
        jet.clear(order);
        let mut part = Jet::new(self.d);
        for (c, f) in &self.parts {
            f.jet_into(x, order, &mut part);
            jet.value += c * part.value;
            if order >= 1 {
                jet.grad.iter_mut().zip(&part.grad).for_each(|(g, p)| *g += c * p);
            }
            if order >= 2 {
                jet.hess.iter_mut().zip(&part.hess).for_each(|(g, p)| *g += c * p);
            }
        }
    }
}

/// Phase twist `e^{iθ|z|} · u`; derivatives are exact off the axis `z = 0`.
#[derive(Clone)]
pub struct GaugeField {
    pub inner: Arc<dyn ClosedForm<f64>>,
    pub theta: f64,
}

impl ClosedForm<f64> for GaugeField {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn jet_into(&self, x: &[f64], order: u8, jet: &mut Jet<f64>) {
        let d = self.dim();
        let n = 2 * d + 1;
        self.inner.jet_into(x, order, jet);
        if self.theta == 0.0 {
            return;
        }
        let r = x[..2 * d].iter().map(|v| v * v).sum::<f64>().sqrt();
        let i = Complex64::new(0.0, 1.0);
        let ph = Complex64::from_polar(1.0, self.theta * r);
        let it = i * self.theta;
        let u = jet.value;
        let dr = |a: usize| if a < 2 * d { x[a] / r } else { 0.0 };
        if order >= 2 {
            let g = jet.grad.clone();
            for a in 0..n {
                for b in 0..n {
                    let drab = if a < 2 * d && b < 2 * d {
                        let kron = if a == b { 1.0 } else { 0.0 };
                        (kron - x[a] * x[b] / (r * r)) / r
                    } else {
                        0.0
                    };
                    let h = jet.hess[a * n + b]
                        + it * (g[a] * dr(b) + g[b] * dr(a))
                        + it * u * drab
                        + it * it * u * dr(a) * dr(b);
                    jet.hess[a * n + b] = h * ph;
                }
            }
        }
        if order >= 1 {
            for a in 0..n {
                jet.grad[a] = (jet.grad[a] + it * u * dr(a)) * ph;
            }
        }
        jet.value = u * ph;
    }
}

/// Separated radial profile `|z|^α e^{−a|z|²} e^{−b t²}` (real).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProduct {
    pub d: usize,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
}

impl RadialProduct {
    /// Radial factor and its first two derivatives.
    pub fn g(&self, r: f64) -> (f64, f64, f64) {
        let g = r.powf(self.alpha) * (-self.a * r * r).exp();
        let l = self.alpha / r - 2.0 * self.a * r;
        (g, l * g, (l * l - self.alpha / (r * r) - 2.0 * self.a) * g)
    }

    pub fn h(&self, t: f64) -> (f64, f64, f64) {
        let h = (-self.b * t * t).exp();
        (h, -2.0 * self.b * t * h, (4.0 * self.b * self.b * t * t - 2.0 * self.b) * h)
    }
}

impl ClosedForm<f64> for RadialProduct {
    fn dim(&self) -> usize {
        self.d
    }
    fn jet_into(&self, x: &[f64], order: u8, jet: &mut Jet<f64>) {
        let d = self.d;
        let n = 2 * d + 1;
        jet.clear(order);
        let r = x[..2 * d].iter().map(|v| v * v).sum::<f64>().sqrt();
        let (g, g1, g2) = self.g(r);
        let (h, h1, h2) = self.h(x[2 * d]);
        let c = |v: f64| Complex64::new(v, 0.0);
        jet.value = c(g * h);
        if order == 0 {
            return;
        }
        for a in 0..2 * d {
            jet.grad[a] = c(g1 * x[a] / r * h);
        }
        jet.grad[2 * d] = c(g * h1);
        if order < 2 {
            return;
        }
        for a in 0..2 * d {
            for b in 0..2 * d {
                let kron = if a == b { 1.0 } else { 0.0 };
                let v = g2 * x[a] * x[b] / (r * r) + g1 * (kron / r - x[a] * x[b] / (r * r * r));
                jet.hess[a * n + b] = c(v * h);
            }
            jet.hess[a * n + 2 * d] = c(g1 * x[a] / r * h1);
            jet.hess[2 * d * n + a] = jet.hess[a * n + 2 * d];
        }
        jet.hess[n * n - 1] = c(g * h2);
    }
}

/// A closed-form test field with its decay descriptor.
#[derive(Clone)]
pub struct TestField {
    pub id: String,
    pub field: Arc<dyn ClosedForm<f64>>,
    pub decay: Decay,
    /// Whether second derivatives (hence `𝓛f`) are exact.
    pub exact_sublaplacian: bool,
    /// `f = O(|z|)` at the axis.
    pub vanishes_on_axis: bool,
}

impl std::fmt::Debug for TestField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestField")
            .field("id", &self.id)
            .field("d", &self.field.dim())
            .field("decay", &self.decay)
            .finish()
    }
}

impl ClosedForm<f64> for TestField {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn jet_into(&self, p: &[f64], order: u8, jet: &mut Jet<f64>) {
        self.field.jet_into(p, order, jet)
    }
}

impl TestField {
    pub fn new(id: impl Into<String>, field: Arc<dyn ClosedForm<f64>>, decay: Decay) -> Self {
        Self {
            id: id.into(),
            field,
            decay,
            exact_sublaplacian: true,
            vanishes_on_axis: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn scaled(&self, c: Complex64) -> TestField {
        TestField {
            id: format!("{}*({}{:+}i)", self.id, c.re, c.im),
            field: Arc::new(SumField {
                d: self.dim(),
                parts: vec![(c, self.field.clone())],
            }),
            ..self.clone()
        }
    }
}
