//! Small discrete solves of `(λ − 𝓛_h)u = f` on ℍ².
//!
//! Verdicts built from a discrete solution are indicative only: the norms
//! are Riemann sums on a coarse box and carry no error bar.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{thm1_verdicts, FreeConstants, InequalityVerdict, MomentSet, Moments};
use crate::error::{Error, Result};
use crate::fields::SpectralParam;
use crate::hgroup::koranyi_norm_coords;

pub const DISCRETE_DISCLAIMER: &str =
    "discrete verdicts are indicative, not certifying: norms are Riemann sums of a finite-difference solution on a truncated box";

const MAX_POINTS: usize = 16;

/// Box `[−half_width, half_width]⁴ × [−half_period, half_period)`; `n` interior
/// nodes per horizontal axis (zero boundary), `nt` nodes in `t` (periodic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteGrid {
    pub n: usize,
    pub nt: usize,
    pub half_width: f64,
    pub half_period: f64,
}

impl DiscreteGrid {
    pub fn new(n: usize, nt: usize, half_width: f64, half_period: f64) -> Result<Self> {
        if n < 2 || nt < 2 || n > MAX_POINTS || nt > MAX_POINTS {
            return Err(Error::Domain(format!("grid sizes must lie in 2..={MAX_POINTS}, got {n} × {nt}")));
        }
        if n % 2 == 1 {
            // an odd count puts a node on the axis z = 0
            return Err(Error::Domain("the horizontal node count must be even".into()));
        }
        if !(half_width > 0.0 && half_period > 0.0) {
            return Err(Error::Domain("box extents must be positive".into()));
        }
        Ok(Self {
            n,
            nt,
            half_width,
            half_period,
        })
    }

    /// Cube of side `n` on `[−3, 3]⁵`.
    pub fn cube(n: usize) -> Result<Self> {
        Self::new(n, n, 3.0, 3.0)
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.n + 1) as f64
    }

    pub fn ht(&self) -> f64 {
        2.0 * self.half_period / self.nt as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(4) * self.nt
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.h().powi(4) * self.ht()
    }

    fn multi(&self, mut i: usize) -> [usize; 5] {
        let mut a = [0; 5];
        a[4] = i % self.nt;
        i /= self.nt;
        for k in (0..4).rev() {
            a[k] = i % self.n;
            i /= self.n;
        }
        a
    }

    /// Coordinates `(x₁, x₂, y₁, y₂, t)` of node `i`.
    pub fn coords(&self, i: usize) -> [f64; 5] {
        let a = self.multi(i);
        let h = self.h();
        let mut c = [0.0; 5];
        for k in 0..4 {
            c[k] = -self.half_width + (a[k] + 1) as f64 * h;
        }
        c[4] = -self.half_period + a[4] as f64 * self.ht();
        c
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(&[f64]) -> Complex64) -> Vec<Complex64> {
        (0..self.len()).map(|i| f(&self.coords(i))).collect()
    }
}

/// `A = λ − 𝓛_h`, `𝓛_h = Σ_j (X_jʰ)ᵀX_jʰ + (Y_jʰ)ᵀY_jʰ` with forward-difference
/// fields. `𝓛_h` is real symmetric positive semidefinite, so `A` is complex
/// symmetric and invertible off the real half-line `λ ≥ 0`.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub grid: DiscreteGrid,
    pub lambda: Complex64,
}

const D: usize = 2;

impl DiscreteOperator {
    pub fn new(grid: DiscreteGrid, s: SpectralParam) -> Self {
        Self {
            grid,
            lambda: s.as_complex(),
        }
    }

    fn strides(&self) -> [usize; 5] {
        let (n, nt) = (self.grid.n, self.grid.nt);
        [n * n * n * nt, n * n * nt, n * nt, nt, 1]
    }

    /// `t`-coefficient of field `k` (0..2 are `X_j`, 2..4 are `Y_j`): `2y_j` or `−2x_j`.
    fn t_coeff(c: &[f64; 5], k: usize) -> f64 {
        if k < D {
            2.0 * c[D + k]
        } else {
            -2.0 * c[k - D]
        }
    }

    /// Shared kernel of a field and its transpose: forward (`sign = 1`) or
    /// backward (`sign = −1`) neighbours, zero outside the box in (x, y).
    fn difference(&self, k: usize, u: &[Complex64], forward: bool) -> Vec<Complex64> {
        let g = &self.grid;
        let (h, ht) = (g.h(), g.ht());
        let st = self.strides();
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![zero; u.len()];
        let other = if k < D { D + k } else { k - D };
        for (i, o) in out.iter_mut().enumerate() {
            let ak = (i / st[k]) % g.n;
            let at = i % g.nt;
            let nb = if forward {
                if ak + 1 < g.n { u[i + st[k]] } else { zero }
            } else if ak > 0 {
                u[i - st[k]]
            } else {
                zero
            };
            let tb = if forward {
                if at + 1 < g.nt { u[i + 1] } else { u[i + 1 - g.nt] }
            } else if at > 0 {
                u[i - 1]
            } else {
                u[i + g.nt - 1]
            };
            let ao = (i / st[other]) % g.n;
            let co = -g.half_width + (ao + 1) as f64 * h;
            let mut c = [0.0; 5];
            c[other] = co;
            // the t-coefficient does not depend on t, so it commutes with the t-shift
            *o = (nb - u[i]) / h + (tb - u[i]) * (Self::t_coeff(&c, k) / ht);
        }
        out
    }

    /// Horizontal field `k` applied to `u` (forward differences).
    pub fn field(&self, k: usize, u: &[Complex64]) -> Vec<Complex64> {
        self.difference(k, u, true)
    }

    fn field_transpose(&self, k: usize, w: &[Complex64]) -> Vec<Complex64> {
        self.difference(k, w, false)
    }

    /// `𝓛_h u`.
    pub fn sublaplacian(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); u.len()];
        for k in 0..2 * D {
            let w = self.field_transpose(k, &self.field(k, u));
            for (o, x) in out.iter_mut().zip(w) {
                *o += x;
            }
        }
        out
    }

    /// `A u = λu − 𝓛_h u`.
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let lu = self.sublaplacian(u);
        u.iter().zip(lu).map(|(&x, l)| self.lambda * x - l).collect()
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    pub u: Vec<Complex64>,
    pub iterations: usize,
    /// Certified `‖Au − f‖ / ‖f‖`, recomputed from scratch.
    pub residual: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub const DISCRETE_TOL: f64 = 1e-8;

/// Solves `A u = f` by conjugate orthogonal CG.
pub fn discrete_solve(op: &DiscreteOperator, f: &[Complex64], max_iter: usize) -> Result<DiscreteSolution> {
    if f.len() != op.grid.len() {
        return Err(Error::DimensionMismatch {
            expected: op.grid.len(),
            got: f.len(),
        });
    }
    let fnorm = norm(f);
    if fnorm == 0.0 {
        return Ok(DiscreteSolution {
            u: vec![Complex64::new(0.0, 0.0); f.len()],
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut x = vec![Complex64::new(0.0, 0.0); f.len()];
    let mut r = f.to_vec();
    let mut p = r.clone();
    let mut rho = dot(&r, &r);
    let mut it = 0;
    // the recursive residual drifts; stop a little below the target and recheck
    while it < max_iter && norm(&r) / fnorm > 0.1 * DISCRETE_TOL {
        it += 1;
        let q = op.apply(&p);
        let pq = dot(&p, &q);
        if pq.norm() == 0.0 || !pq.is_finite() {
            break;
        }
        let alpha = rho / pq;
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rho_new = dot(&r, &r);
        let beta = rho_new / rho;
        rho = rho_new;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
    }
    let ax = op.apply(&x);
    let residual = norm(&ax.iter().zip(f).map(|(a, b)| a - b).collect::<Vec<_>>()) / fnorm;
    if !(residual <= DISCRETE_TOL) {
        return Err(Error::Solver { iterations: it, residual });
    }
    Ok(DiscreteSolution {
        u: x,
        iterations: it,
        residual,
    })
}

/// Riemann-sum moments of a grid pair `(u, f)`, with `L = λu − f`.
pub fn grid_moments(op: &DiscreteOperator, u: &[Complex64], f: &[Complex64], member: &str) -> Moments {
    let g = &op.grid;
    let grads: Vec<Vec<Complex64>> = (0..2 * D).map(|k| op.field(k, u)).collect();
    let mut ms = MomentSet::default();
    for i in 0..g.len() {
        let c = g.coords(i);
        let r2 = c[..2 * D].iter().map(|x| x * x).sum::<f64>();
        let r = r2.sqrt();
        let nn = koranyi_norm_coords(D, &c);
        let n2 = nn * nn;
        let ui = u[i];
        let li = op.lambda * ui - f[i];
        let g2: f64 = grads.iter().map(|gk| gk[i].norm_sqr()).sum();
        let dz: Complex64 = (0..2 * D).map(|k| grads[k][i] * c[k]).sum();
        let u2 = ui.norm_sqr();
        ms.g += g2;
        ms.u += u2;
        ms.u_r1 += u2 / r;
        ms.u_r2 += u2 / r2;
        ms.u_r += r * u2;
        ms.g_r += r * g2;
        ms.s += (ui.conj() * dz).im / r;
        ms.s_r += (ui.conj() * dz).im;
        ms.u_n2 += u2 / n2;
        ms.a += r2 * li.norm_sqr();
        ms.b += r2 * li.conj() * ui;
        ms.c += r2 * u2;
        ms.a_n += n2 * li.norm_sqr();
        ms.b_n += n2 * li.conj() * ui;
        ms.c_n += n2 * u2;
        ms.l1 += li * ui.conj();
    }
    let vol = g.cell_volume();
    let scale = |x: &mut f64| *x *= vol;
    for x in [
        &mut ms.g, &mut ms.u, &mut ms.u_r1, &mut ms.u_r2, &mut ms.u_r, &mut ms.g_r, &mut ms.s, &mut ms.s_r,
        &mut ms.u_n2, &mut ms.a, &mut ms.c, &mut ms.a_n, &mut ms.c_n,
    ] {
        scale(x);
    }
    ms.b *= vol;
    ms.b_n *= vol;
    ms.l1 *= vol;
    Moments {
        d: D,
        member: member.into(),
        potential: None,
        fine: ms,
        coarse: ms,
        bilap_phi3: 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteVerdicts {
    pub disclaimer: String,
    pub grid: DiscreteGrid,
    pub iterations: usize,
    pub residual: f64,
    pub verdicts: Vec<InequalityVerdict>,
}

/// Solves for `f` sampled on `grid` and feeds the result to the free-case verdicts.
pub fn discrete_thm1(
    grid: DiscreteGrid,
    s: SpectralParam,
    f: impl Fn(&[f64]) -> Complex64,
    consts: &FreeConstants,
    member: &str,
) -> Result<DiscreteVerdicts> {
    if consts.d != D {
        return Err(Error::DimensionMismatch { expected: D, got: consts.d });
    }
    let op = DiscreteOperator::new(grid, s);
    let fv = grid.sample(f);
    let sol = discrete_solve(&op, &fv, 20 * grid.len())?;
    let m = grid_moments(&op, &sol.u, &fv, member);
    Ok(DiscreteVerdicts {
        disclaimer: DISCRETE_DISCLAIMER.into(),
        grid,
        iterations: sol.iterations,
        residual: sol.residual,
        verdicts: thm1_verdicts(&m, s, consts),
    })
}
