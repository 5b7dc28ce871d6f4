use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Sparse complex polynomial in the flat coordinates `(x.., y.., t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub n: usize,
    pub terms: Vec<(Complex64, Vec<u8>)>,
}

/// Value, gradient and Hessian (row-major) of a polynomial at a point.
#[derive(Debug, Clone)]
pub struct PolyJet {
    pub value: Complex64,
    pub grad: Vec<Complex64>,
    pub hess: Vec<Complex64>,
}

impl PolyJet {
    pub fn new(n: usize) -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            grad: vec![Complex64::new(0.0, 0.0); n],
            hess: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self {
            n,
            terms: vec![(c, vec![0; n])],
        }
    }

    /// Single monomial `c · Π p_a^{e_a}`.
    pub fn monomial(c: Complex64, exps: Vec<u8>) -> Self {
        Self {
            n: exps.len(),
            terms: vec![(c, exps)],
        }
    }

    /// The coordinate function `p_a`.
    pub fn coordinate(n: usize, a: usize) -> Self {
        let mut e = vec![0; n];
        e[a] = 1;
        Self::monomial(Complex64::new(1.0, 0.0), e)
    }

    /// `|z|² = Σ x_j² + y_j²` for `n = 2d + 1`.
    pub fn z_norm_sqr(n: usize) -> Self {
        let d = (n - 1) / 2;
        let mut p = Self::zero(n);
        for a in 0..2 * d {
            let mut e = vec![0; n];
            e[a] = 2;
            p.terms.push((Complex64::new(1.0, 0.0), e));
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().map(|&k| k as usize).sum::<usize>())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(mut self, c: Complex64) -> Self {
        self.terms.iter_mut().for_each(|(k, _)| *k *= c);
        self
    }

    pub fn add(mut self, other: &Self) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self.simplify()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                terms.push((a * b, ea.iter().zip(eb).map(|(x, y)| x + y).collect()));
            }
        }
        Self { n: self.n, terms }.simplify()
    }

    /// Merges equal monomials and drops zero coefficients.
    pub fn simplify(mut self) -> Self {
        self.terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out: Vec<(Complex64, Vec<u8>)> = Vec::with_capacity(self.terms.len());
        for (c, e) in self.terms {
            match out.last_mut() {
                Some((c0, e0)) if *e0 == e => *c0 += c,
                _ => out.push((c, e)),
            }
        }
        out.retain(|(c, _)| c.norm() != 0.0);
        Self { n: self.n, terms: out }
    }

    /// Power table `pw[a * (deg+1) + k] = p_a^k` shared by all terms.
    fn powers(&self, p: &[f64], deg: usize, pw: &mut Vec<f64>) {
        pw.clear();
        for &x in &p[..self.n] {
            let mut v = 1.0;
            for _ in 0..=deg {
                pw.push(v);
                v *= x;
            }
        }
    }

    pub fn eval(&self, p: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, e) in &self.terms {
            let mut m = 1.0;
            for (a, &k) in e.iter().enumerate() {
                m *= p[a].powi(k as i32);
            }
            acc += c * m;
        }
        acc
    }

    /// Fills value, gradient (order ≥ 1) and Hessian (order 2).
    pub fn jet_into(&self, p: &[f64], order: u8, out: &mut PolyJet, scratch: &mut Vec<f64>) {
        let n = self.n;
        let deg = self.degree().max(1);
        self.powers(p, deg, scratch);
        let pw = |a: usize, k: i32| -> f64 {
            if k < 0 {
                0.0
            } else {
                scratch[a * (deg + 1) + k as usize]
            }
        };
        let zero = Complex64::new(0.0, 0.0);
        out.value = zero;
        if order >= 1 {
            out.grad[..n].iter_mut().for_each(|g| *g = zero);
        }
        if order >= 2 {
            out.hess[..n * n].iter_mut().for_each(|g| *g = zero);
        }
        for (c, e) in &self.terms {
            let mut m = 1.0;
            for a in 0..n {
                m *= pw(a, e[a] as i32);
            }
            out.value += c * m;
            if order == 0 {
                continue;
            }
            for a in 0..n {
                let ka = e[a] as i32;
                if ka == 0 {
                    continue;
                }
                let mut g = ka as f64 * pw(a, ka - 1);
                for b in 0..n {
                    if b != a {
                        g *= pw(b, e[b] as i32);
                    }
                }
                out.grad[a] += c * g;
                if order < 2 {
                    continue;
                }
                for b in a..n {
                    let kb = e[b] as i32;
                    let h = if b == a {
                        if ka < 2 {
                            continue;
                        }
                        let mut h = (ka * (ka - 1)) as f64 * pw(a, ka - 2);
                        for q in 0..n {
                            if q != a {
                                h *= pw(q, e[q] as i32);
                            }
                        }
                        h
                    } else {
                        if kb == 0 {
                            continue;
                        }
                        let mut h = (ka * kb) as f64 * pw(a, ka - 1) * pw(b, kb - 1);
                        for q in 0..n {
                            if q != a && q != b {
                                h *= pw(q, e[q] as i32);
                            }
                        }
                        h
                    };
                    out.hess[a * n + b] += c * h;
                    if b != a {
                        out.hess[b * n + a] += c * h;
                    }
                }
            }
        }
    }
}
