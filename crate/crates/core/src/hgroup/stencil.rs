use num_complex::Complex;

use super::ops::FieldOp;
use super::point::{HPoint, HVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Second-order central differences applied to a pointwise evaluator.
///
/// The sublaplacian is built by composing the first-order discrete fields,
/// so it is exactly `−Σ (X_j,h² + Y_j,h²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil<T> {
    pub h: T,
}

impl<T: Real> Stencil<T> {
    pub fn new(h: T) -> Self {
        Self { h }
    }

    fn partial<F>(&self, f: &F, p: &[T], axis: usize) -> Complex<T>
    where
        F: Fn(&[T]) -> Complex<T>,
    {
        let mut q = p.to_vec();
        q[axis] = p[axis] + self.h;
        let fp = f(&q);
        q[axis] = p[axis] - self.h;
        let fm = f(&q);
        (fp - fm) / (T::int(2) * self.h)
    }

    /// Discrete `X_j`, `Y_j` or `T` applied to `f` at the flat point `p`.
    pub fn apply_at<F>(&self, op: FieldOp, f: &F, p: &[T], d: usize) -> Complex<T>
    where
        F: Fn(&[T]) -> Complex<T>,
    {
        let coef = op.coefficients(p, d);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (axis, &c) in coef.iter().enumerate() {
            if c != T::zero() {
                acc = acc + self.partial(f, p, axis) * c;
            }
        }
        acc
    }

    pub fn apply_field<F>(&self, op: FieldOp, f: &F, p: &HPoint<T>) -> Result<Complex<T>>
    where
        F: Fn(&[T]) -> Complex<T>,
    {
        op.check(p.dim())?;
        Ok(self.apply_at(op, f, p.coords(), p.dim()))
    }

    pub fn horizontal_gradient<F>(&self, f: &F, p: &HPoint<T>) -> Result<HVector<Complex<T>>>
    where
        F: Fn(&[T]) -> Complex<T>,
    {
        let d = p.dim();
        let mut out = Vec::with_capacity(2 * d);
        for j in 0..d {
            out.push(self.apply_at(FieldOp::X(j), f, p.coords(), d));
        }
        for j in 0..d {
            out.push(self.apply_at(FieldOp::Y(j), f, p.coords(), d));
        }
        HVector::new(out)
    }

    pub fn sublaplacian<F>(&self, f: &F, p: &HPoint<T>) -> Result<Complex<T>>
    where
        F: Fn(&[T]) -> Complex<T>,
    {
        let d = p.dim();
        let mut acc = Complex::new(T::zero(), T::zero());
        for j in 0..d {
            for op in [FieldOp::X(j), FieldOp::Y(j)] {
                let inner = |q: &[T]| self.apply_at(op, f, q, d);
                acc = acc + self.apply_at(op, &inner, p.coords(), d);
            }
        }
        Ok(-acc)
    }
}

/// Complex samples on a uniform grid in ℝ^{2d+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    pub d: usize,
    /// Points per axis, layout `(x.., y.., t)`; the last axis varies fastest.
    pub shape: Vec<usize>,
    pub origin: Vec<T>,
    pub h: T,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> GridField<T> {
    /// Samples `f` at `origin + h · index`.
    pub fn sample<F>(d: usize, shape: Vec<usize>, origin: Vec<T>, h: T, f: F) -> Result<Self>
    where
        F: Fn(&[T]) -> Complex<T>,
    {
        let n = 2 * d + 1;
        if shape.len() != n || origin.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: shape.len().min(origin.len()),
            });
        }
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        let mut p = vec![T::zero(); n];
        for _ in 0..total {
            for a in 0..n {
                p[a] = origin[a] + h * T::from_usize(idx[a]).unwrap();
            }
            values.push(f(&p));
            for a in (0..n).rev() {
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        Ok(Self {
            d,
            shape,
            origin,
            h,
            values,
        })
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |o, (&i, &s)| o * s + i)
    }

    pub fn coords_of(&self, idx: &[usize]) -> Vec<T> {
        idx.iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + self.h * T::from_usize(i).unwrap())
            .collect()
    }

    pub fn get(&self, idx: &[usize]) -> Complex<T> {
        self.values[self.offset(idx)]
    }

    fn shifted(&self, idx: &[usize], axis: usize, delta: isize) -> Result<Vec<usize>> {
        let i = idx[axis] as isize + delta;
        if i < 0 || i >= self.shape[axis] as isize {
            return Err(Error::StencilOutOfBounds {
                index: idx.to_vec(),
                axis,
            });
        }
        let mut out = idx.to_vec();
        out[axis] = i as usize;
        Ok(out)
    }

    fn partial(&self, idx: &[usize], axis: usize) -> Result<Complex<T>> {
        let p = self.shifted(idx, axis, 1)?;
        let m = self.shifted(idx, axis, -1)?;
        Ok((self.get(&p) - self.get(&m)) / (T::int(2) * self.h))
    }

    /// Discrete field applied at a grid index; the index must be at least one
    /// cell away from the boundary along every differentiated axis.
    pub fn apply_field(&self, op: FieldOp, idx: &[usize]) -> Result<Complex<T>> {
        op.check(self.d)?;
        if idx.len() != self.shape.len() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.len(),
                got: idx.len(),
            });
        }
        let p = self.coords_of(idx);
        let coef = op.coefficients(&p, self.d);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (axis, &c) in coef.iter().enumerate() {
            if c != T::zero() {
                acc = acc + self.partial(idx, axis)? * c;
            }
        }
        Ok(acc)
    }

    pub fn horizontal_gradient(&self, idx: &[usize]) -> Result<HVector<Complex<T>>> {
        let mut out = Vec::with_capacity(2 * self.d);
        for j in 0..self.d {
            out.push(self.apply_field(FieldOp::X(j), idx)?);
        }
        for j in 0..self.d {
            out.push(self.apply_field(FieldOp::Y(j), idx)?);
        }
        HVector::new(out)
    }

    /// Composed stencil `−Σ (X_j(X_j f) + Y_j(Y_j f))`; needs two cells of margin.
    pub fn sublaplacian(&self, idx: &[usize]) -> Result<Complex<T>> {
        let d = self.d;
        let p = self.coords_of(idx);
        let mut acc = Complex::new(T::zero(), T::zero());
        for j in 0..d {
            for op in [FieldOp::X(j), FieldOp::Y(j)] {
                let coef = op.coefficients(&p, d);
                for (axis, &c) in coef.iter().enumerate() {
                    if c == T::zero() {
                        continue;
                    }
                    let up = self.apply_field(op, &self.shifted(idx, axis, 1)?)?;
                    let dn = self.apply_field(op, &self.shifted(idx, axis, -1)?)?;
                    acc = acc + (up - dn) / (T::int(2) * self.h) * c;
                }
            }
        }
        Ok(-acc)
    }
}
