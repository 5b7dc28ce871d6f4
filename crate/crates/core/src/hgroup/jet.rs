use num_complex::Complex;

use crate::scalar::Real;

/// Value, gradient and Hessian of a complex field with respect to the
/// Euclidean coordinates `(x_1..x_d, y_1..y_d, t)`.
///
/// `order` records how much was filled: 0 (value), 1 (+gradient), 2 (+Hessian).
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    pub d: usize,
    pub order: u8,
    pub value: Complex<T>,
    pub grad: Vec<Complex<T>>,
    /// Row-major `(2d+1)²`, symmetric.
    pub hess: Vec<Complex<T>>,
}

impl<T: Real> Jet<T> {
    pub fn new(d: usize) -> Self {
        let n = 2 * d + 1;
        Self {
            d,
            order: 0,
            value: Complex::new(T::zero(), T::zero()),
            grad: vec![Complex::new(T::zero(), T::zero()); n],
            hess: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn n(&self) -> usize {
        2 * self.d + 1
    }

    pub fn clear(&mut self, order: u8) {
        let z = Complex::new(T::zero(), T::zero());
        self.order = order;
        self.value = z;
        if order >= 1 {
            self.grad.iter_mut().for_each(|g| *g = z);
        }
        if order >= 2 {
            self.hess.iter_mut().for_each(|h| *h = z);
        }
    }

    #[inline]
    pub fn h(&self, a: usize, b: usize) -> Complex<T> {
        self.hess[a * self.n() + b]
    }

    /// Horizontal gradient `(X_j f, Y_j f)` at the point `p` (flat coordinates).
    pub fn horizontal_into(&self, p: &[T], out: &mut [Complex<T>]) {
        let d = self.d;
        let ft = self.grad[2 * d];
        let two = T::int(2);
        for j in 0..d {
            out[j] = self.grad[j] + ft * (two * p[d + j]);
            out[d + j] = self.grad[d + j] - ft * (two * p[j]);
        }
    }

    /// `𝓛f = −Σ (X_j² + Y_j²) f`.
    pub fn sublaplacian(&self, p: &[T]) -> Complex<T> {
        let d = self.d;
        let tt = 2 * d;
        let four = T::int(4);
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut r2 = T::zero();
        for j in 0..d {
            let (x, y) = (p[j], p[d + j]);
            r2 = r2 + x * x + y * y;
            acc = acc + self.h(j, j) + self.h(d + j, d + j);
            acc = acc + (self.h(j, tt) * y - self.h(d + j, tt) * x) * four;
        }
        acc = acc + self.h(tt, tt) * (four * r2);
        -acc
    }

    /// Horizontal Hessian `(X_iX_j, X_iY_j; Y_iX_j, Y_iY_j)` applied to the field,
    /// row-major `2d × 2d`. Not symmetric: `X_iY_i − Y_iX_i = −4T`.
    pub fn horizontal_hessian_into(&self, p: &[T], out: &mut [Complex<T>]) {
        let d = self.d;
        let m = 2 * d;
        let tt = 2 * d;
        let two = T::int(2);
        let four = T::int(4);
        let ft = self.grad[tt];
        let ftt = self.h(tt, tt);
        for i in 0..d {
            let (xi, yi) = (p[i], p[d + i]);
            for j in 0..d {
                let (xj, yj) = (p[j], p[d + j]);
                let kron = if i == j { T::one() } else { T::zero() };
                // X_i X_j
                out[i * m + j] = self.h(i, j) + self.h(i, tt) * (two * yj) + self.h(j, tt) * (two * yi)
                    + ftt * (four * yi * yj);
                // X_i Y_j
                out[i * m + d + j] = self.h(i, d + j) - ft * (two * kron) - self.h(i, tt) * (two * xj)
                    + self.h(d + j, tt) * (two * yi)
                    - ftt * (four * yi * xj);
                // Y_i X_j
                out[(d + i) * m + j] = self.h(d + i, j) + ft * (two * kron) + self.h(d + i, tt) * (two * yj)
                    - self.h(j, tt) * (two * xi)
                    - ftt * (four * xi * yj);
                // Y_i Y_j
                out[(d + i) * m + d + j] = self.h(d + i, d + j) - self.h(d + i, tt) * (two * xj)
                    - self.h(d + j, tt) * (two * xi)
                    + ftt * (four * xi * xj);
            }
        }
    }
}

/// A field on ℍᵈ with exact Euclidean partial derivatives.
pub trait ClosedForm<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    /// Fills `jet` to the requested order (0, 1 or 2) at the flat point `p`.
    fn jet_into(&self, p: &[T], order: u8, jet: &mut Jet<T>);

    fn jet(&self, p: &[T], order: u8) -> Jet<T> {
        let mut j = Jet::new(self.dim());
        self.jet_into(p, order, &mut j);
        j
    }

    fn value(&self, p: &[T]) -> Complex<T> {
        self.jet(p, 0).value
    }
}

impl<T: Real, F: ClosedForm<T> + ?Sized> ClosedForm<T> for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn jet_into(&self, p: &[T], order: u8, jet: &mut Jet<T>) {
        (**self).jet_into(p, order, jet)
    }
}

impl<T: Real, F: ClosedForm<T> + ?Sized> ClosedForm<T> for std::sync::Arc<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn jet_into(&self, p: &[T], order: u8, jet: &mut Jet<T>) {
        (**self).jet_into(p, order, jet)
    }
}

/// Closed-form field given by closures (value, gradient, Hessian), handy for
/// coordinate functions and one-off oracles.
pub struct FnField<T, F> {
    d: usize,
    f: F,
    _t: std::marker::PhantomData<T>,
}

impl<T: Real, F> FnField<T, F>
where
    F: Fn(&[T], u8, &mut Jet<T>) + Send + Sync,
{
    pub fn new(d: usize, f: F) -> Self {
        Self {
            d,
            f,
            _t: std::marker::PhantomData,
        }
    }
}

impl<T: Real, F> ClosedForm<T> for FnField<T, F>
where
    F: Fn(&[T], u8, &mut Jet<T>) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.d
    }
    fn jet_into(&self, p: &[T], order: u8, jet: &mut Jet<T>) {
        jet.clear(order);
        (self.f)(p, order, jet)
    }
}
