use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::jet::{ClosedForm, Jet};
use super::point::{HPoint, HVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One of the left-invariant fields `X_j`, `Y_j` (0-based `j`) or `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldOp {
    X(usize),
    Y(usize),
    T,
}

impl FieldOp {
    pub(crate) fn check(self, d: usize) -> Result<()> {
        match self {
            FieldOp::X(j) | FieldOp::Y(j) if j >= d => Err(Error::DimensionMismatch { expected: d, got: j + 1 }),
            _ => Ok(()),
        }
    }

    /// Euclidean coefficient vector of the field at `p`.
    pub fn coefficients<T: Real>(self, p: &[T], d: usize) -> Vec<T> {
        let mut c = vec![T::zero(); 2 * d + 1];
        match self {
            FieldOp::X(j) => {
                c[j] = T::one();
                c[2 * d] = T::int(2) * p[d + j];
            }
            FieldOp::Y(j) => {
                c[d + j] = T::one();
                c[2 * d] = -T::int(2) * p[j];
            }
            FieldOp::T => c[2 * d] = T::one(),
        }
        c
    }
}

fn check_dim<T: Real>(f: &impl ClosedForm<T>, p: &HPoint<T>) -> Result<()> {
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: p.dim(),
        });
    }
    Ok(())
}

/// `X_j f`, `Y_j f` or `T f` from exact partials.
pub fn apply_field<T: Real>(op: FieldOp, f: &impl ClosedForm<T>, p: &HPoint<T>) -> Result<Complex<T>> {
    check_dim(f, p)?;
    op.check(p.dim())?;
    let jet = f.jet(p.coords(), 1);
    let coef = op.coefficients(p.coords(), p.dim());
    Ok(jet
        .grad
        .iter()
        .zip(&coef)
        .fold(Complex::new(T::zero(), T::zero()), |s, (g, &c)| s + g * c))
}

pub fn horizontal_gradient<T: Real>(f: &impl ClosedForm<T>, p: &HPoint<T>) -> Result<HVector<Complex<T>>> {
    check_dim(f, p)?;
    let jet = f.jet(p.coords(), 1);
    let mut out = vec![Complex::new(T::zero(), T::zero()); 2 * p.dim()];
    jet.horizontal_into(p.coords(), &mut out);
    HVector::new(out)
}

pub fn sublaplacian<T: Real>(f: &impl ClosedForm<T>, p: &HPoint<T>) -> Result<Complex<T>> {
    check_dim(f, p)?;
    Ok(f.jet(p.coords(), 2).sublaplacian(p.coords()))
}

/// Horizontal Hessian, row-major `2d × 2d`.
pub fn horizontal_hessian<T: Real>(f: &impl ClosedForm<T>, p: &HPoint<T>) -> Result<Vec<Complex<T>>> {
    check_dim(f, p)?;
    let d = p.dim();
    let mut out = vec![Complex::new(T::zero(), T::zero()); 4 * d * d];
    f.jet(p.coords(), 2).horizontal_hessian_into(p.coords(), &mut out);
    Ok(out)
}

/// `∂_r f = (z/|z|) · ∇_H f`; fails within `eps_axis` of the axis `z = 0`.
pub fn radial_derivative<T: Real>(f: &impl ClosedForm<T>, p: &HPoint<T>, eps_axis: T) -> Result<Complex<T>> {
    let r = p.z_norm();
    if r <= eps_axis {
        return Err(Error::SingularAxis {
            norm: r.to_f64_lossy(),
            eps: eps_axis.to_f64_lossy(),
        });
    }
    let g = horizontal_gradient(f, p)?;
    let d = p.dim();
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..d {
        acc = acc + g.x_part()[j] * p.x()[j] + g.y_part()[j] * p.y()[j];
    }
    Ok(acc / r)
}

/// The Koranyi gauge as a closed-form field.
#[derive(Debug, Clone, Copy)]
pub struct KoranyiNorm {
    pub d: usize,
}

impl<T: Real> ClosedForm<T> for KoranyiNorm {
    fn dim(&self) -> usize {
        self.d
    }
    fn jet_into(&self, p: &[T], order: u8, jet: &mut Jet<T>) {
        let d = self.d;
        let n = 2 * d + 1;
        jet.clear(order);
        let r2 = p[..2 * d].iter().fold(T::zero(), |s, &v| s + v * v);
        let t = p[2 * d];
        let q = r2 * r2 + t * t;
        let nrm = q.sqrt().sqrt();
        jet.value = Complex::new(nrm, T::zero());
        if order == 0 || q == T::zero() {
            return;
        }
        // N = Q^{1/4}, ∂N = Q^{-3/4} ∂Q / 4
        let four = T::int(4);
        let q34 = nrm * nrm * nrm;
        let mut dq = vec![T::zero(); n];
        for a in 0..2 * d {
            dq[a] = four * r2 * p[a];
        }
        dq[2 * d] = T::int(2) * t;
        for a in 0..n {
            jet.grad[a] = Complex::new(dq[a] / (four * q34), T::zero());
        }
        if order < 2 {
            return;
        }
        let q74 = q34 * q;
        let c = T::lit(3.0 / 16.0);
        for a in 0..n {
            for b in 0..n {
                let d2q = if a < 2 * d && b < 2 * d {
                    let kron = if a == b { r2 } else { T::zero() };
                    four * (T::int(2) * p[a] * p[b] + kron)
                } else if a == 2 * d && b == 2 * d {
                    T::int(2)
                } else {
                    T::zero()
                };
                let v = d2q / (four * q34) - c * dq[a] * dq[b] / q74;
                jet.hess[a * n + b] = Complex::new(v, T::zero());
            }
        }
    }
}

/// `∇_H N = (|z|² z + (y, −x) t) / N³`.
pub fn koranyi_gradient_oracle<T: Real>(p: &HPoint<T>) -> HVector<T> {
    let d = p.dim();
    let r2 = p.z_norm_sqr();
    let n = koranyi_norm(p);
    let n3 = n * n * n;
    let t = p.t();
    let mut c = Vec::with_capacity(2 * d);
    for j in 0..d {
        c.push((r2 * p.x()[j] + p.y()[j] * t) / n3);
    }
    for j in 0..d {
        c.push((r2 * p.y()[j] - p.x()[j] * t) / n3);
    }
    HVector::new(c).expect("2d components")
}

/// `|∇_H N| = |z| / N`.
pub fn koranyi_gradient_norm_oracle<T: Real>(p: &HPoint<T>) -> T {
    p.z_norm() / koranyi_norm(p)
}

/// `𝓛 N = −(2d+1)|z|² / N³`.
pub fn koranyi_sublaplacian_oracle<T: Real>(p: &HPoint<T>) -> T {
    let n = koranyi_norm(p);
    -T::from_usize(2 * p.dim() + 1).unwrap() * p.z_norm_sqr() / (n * n * n)
}

use super::point::koranyi_norm;

/// A real vector field `h: ℝ^{2d+1} → ℝ^{2d+1}` with exact Jacobian.
pub trait VectorField<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    /// Writes `h(p)` into `value` and `∂_b h_a` into `jac[a * n + b]`.
    fn eval(&self, p: &[T], value: &mut [T], jac: &mut [T]);
}

/// Horizontal radial field `h = (x, y, 0) / |z|^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialHorizontalField {
    pub d: usize,
    pub k: f64,
}

impl<T: Real> VectorField<T> for RadialHorizontalField {
    fn dim(&self) -> usize {
        self.d
    }
    fn eval(&self, p: &[T], value: &mut [T], jac: &mut [T]) {
        let d = self.d;
        let n = 2 * d + 1;
        let k = T::lit(self.k);
        let r2 = p[..2 * d].iter().fold(T::zero(), |s, &v| s + v * v);
        let rk = r2.powf(k / T::int(2));
        for a in 0..n {
            value[a] = if a < 2 * d { p[a] / rk } else { T::zero() };
            for b in 0..n {
                jac[a * n + b] = if a < 2 * d && b < 2 * d {
                    let kron = if a == b { T::one() } else { T::zero() };
                    kron / rk - k * p[a] * p[b] / (rk * r2)
                } else {
                    T::zero()
                };
            }
        }
    }
}

/// `div_H h = div(σᵀσ h) = Σ_j X_j(h_{x_j} + 2y_j h_t) + Y_j(h_{y_j} − 2x_j h_t)`.
pub fn div_horizontal<T: Real>(h: &impl VectorField<T>, p: &HPoint<T>) -> Result<T> {
    if h.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: p.dim(),
        });
    }
    let d = p.dim();
    let n = 2 * d + 1;
    let mut v = vec![T::zero(); n];
    let mut jac = vec![T::zero(); n * n];
    h.eval(p.coords(), &mut v, &mut jac);
    Ok(div_horizontal_from(d, p.coords(), &v, &jac))
}

pub(crate) fn div_horizontal_from<T: Real>(d: usize, p: &[T], v: &[T], jac: &[T]) -> T {
    let n = 2 * d + 1;
    let tt = 2 * d;
    let two = T::int(2);
    let j_ = |a: usize, b: usize| jac[a * n + b];
    let mut acc = T::zero();
    for j in 0..d {
        let (x, y) = (p[j], p[d + j]);
        // w = h_xj + 2 y_j h_t ; X_j w = ∂x_j w + 2 y_j ∂t w
        let dx_w = j_(j, j) + two * y * j_(tt, j);
        let dt_w = j_(j, tt) + two * y * j_(tt, tt);
        acc = acc + dx_w + two * y * dt_w;
        // w = h_yj − 2 x_j h_t ; Y_j w = ∂y_j w − 2 x_j ∂t w
        let dy_w = j_(d + j, d + j) - two * x * j_(tt, d + j);
        let dt_w = j_(d + j, tt) - two * x * j_(tt, tt);
        acc = acc + dy_w - two * x * dt_w;
    }
    let _ = v;
    acc
}

/// Pointwise `|σ h|` (length of the horizontal projection).
pub fn sigma_h_norm<T: Real>(d: usize, p: &[T], v: &[T]) -> T {
    let two = T::int(2);
    let mut s = T::zero();
    for j in 0..d {
        let a = v[j] + two * p[d + j] * v[2 * d];
        let b = v[d + j] - two * p[j] * v[2 * d];
        s = s + a * a + b * b;
    }
    s.sqrt()
}
