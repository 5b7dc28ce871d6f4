use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A point `(z, t)` of the Heisenberg group, stored in real coordinates
/// `(x_1..x_d, y_1..y_d, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint<T> {
    d: usize,
    coords: Vec<T>,
}

impl<T: Real> HPoint<T> {
    pub fn new(x: &[T], y: &[T], t: T) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::Domain("dimension d must be at least 1".into()));
        }
        let mut coords = Vec::with_capacity(2 * x.len() + 1);
        coords.extend_from_slice(x);
        coords.extend_from_slice(y);
        coords.push(t);
        Ok(Self { d: x.len(), coords })
    }

    /// Builds a point from the flat layout `(x, y, t)` of length `2d + 1`.
    pub fn from_coords(d: usize, coords: &[T]) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension d must be at least 1".into()));
        }
        if coords.len() != 2 * d + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * d + 1,
                got: coords.len(),
            });
        }
        Ok(Self {
            d,
            coords: coords.to_vec(),
        })
    }

    pub fn origin(d: usize) -> Self {
        Self {
            d,
            coords: vec![T::zero(); 2 * d + 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn x(&self) -> &[T] {
        &self.coords[..self.d]
    }
    pub fn y(&self) -> &[T] {
        &self.coords[self.d..2 * self.d]
    }
    pub fn t(&self) -> T {
        self.coords[2 * self.d]
    }
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// `|z|² = |x|² + |y|²`.
    pub fn z_norm_sqr(&self) -> T {
        self.coords[..2 * self.d].iter().fold(T::zero(), |s, &c| s + c * c)
    }

    pub fn z_norm(&self) -> T {
        self.z_norm_sqr().sqrt()
    }

    pub fn inverse(&self) -> Self {
        Self {
            d: self.d,
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }
}

/// Group law `(z, t)(z', t') = (z + z', t + t' + 2 Im(z · conj z'))`.
pub fn group_multiply<T: Real>(p: &HPoint<T>, q: &HPoint<T>) -> Result<HPoint<T>> {
    if p.d != q.d {
        return Err(Error::DimensionMismatch {
            expected: p.d,
            got: q.d,
        });
    }
    let d = p.d;
    // Im(z_j conj(z'_j)) = y_j x'_j - x_j y'_j
    let mut twist = T::zero();
    for j in 0..d {
        twist = twist + p.y()[j] * q.x()[j] - p.x()[j] * q.y()[j];
    }
    let mut coords: Vec<T> = p.coords.iter().zip(&q.coords).map(|(&a, &b)| a + b).collect();
    coords[2 * d] = coords[2 * d] + T::int(2) * twist;
    Ok(HPoint { d, coords })
}

/// Koranyi gauge `(|z|⁴ + t²)^{1/4}`.
pub fn koranyi_norm<T: Real>(p: &HPoint<T>) -> T {
    koranyi_norm_coords(p.d, &p.coords)
}

pub(crate) fn koranyi_norm_coords<T: Real>(d: usize, c: &[T]) -> T {
    let r2 = c[..2 * d].iter().fold(T::zero(), |s, &v| s + v * v);
    let t = c[2 * d];
    (r2 * r2 + t * t).sqrt().sqrt()
}

/// Horizontal vector: coefficients in the frame `(X_1..X_d, Y_1..Y_d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HVector<C> {
    components: Vec<C>,
}

impl<C: Copy> HVector<C> {
    /// Length must be even (`2d`); there is no vertical slot.
    pub fn new(components: Vec<C>) -> Result<Self> {
        if components.is_empty() || components.len() % 2 != 0 {
            return Err(Error::Domain(format!(
                "horizontal vector needs 2d components, got {}",
                components.len()
            )));
        }
        Ok(Self { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len() / 2
    }
    pub fn components(&self) -> &[C] {
        &self.components
    }
    pub fn x_part(&self) -> &[C] {
        &self.components[..self.dim()]
    }
    pub fn y_part(&self) -> &[C] {
        &self.components[self.dim()..]
    }
}

impl<T: Real> HVector<T> {
    pub fn norm(&self) -> T {
        self.components.iter().fold(T::zero(), |s, &c| s + c * c).sqrt()
    }
}

impl<T: Real> HVector<num_complex::Complex<T>> {
    pub fn norm(&self) -> T {
        self.components.iter().fold(T::zero(), |s, c| s + c.norm_sqr()).sqrt()
    }
}

/// The `2d × (2d+1)` matrix σ mapping Euclidean gradients to horizontal ones:
/// blocks `(I, 0, 2y; 0, I, −2x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaMatrix<T> {
    d: usize,
    x: Vec<T>,
    y: Vec<T>,
}

impl<T: Real> SigmaMatrix<T> {
    pub fn at(p: &HPoint<T>) -> Self {
        Self {
            d: p.d,
            x: p.x().to_vec(),
            y: p.y().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        2 * self.d
    }
    pub fn cols(&self) -> usize {
        2 * self.d + 1
    }

    pub fn entry(&self, i: usize, k: usize) -> T {
        let d = self.d;
        if k == 2 * d {
            return if i < d {
                T::int(2) * self.y[i]
            } else {
                -T::int(2) * self.x[i - d]
            };
        }
        if i == k {
            T::one()
        } else {
            T::zero()
        }
    }

    /// `σ v` for a vector in ℝ^{2d+1}.
    pub fn apply(&self, v: &[T]) -> Result<HVector<T>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                got: v.len(),
            });
        }
        let d = self.d;
        let vt = v[2 * d];
        let mut out = Vec::with_capacity(2 * d);
        for j in 0..d {
            out.push(v[j] + T::int(2) * self.y[j] * vt);
        }
        for j in 0..d {
            out.push(v[d + j] - T::int(2) * self.x[j] * vt);
        }
        HVector::new(out)
    }

    /// `σᵀ w` for a horizontal vector.
    pub fn apply_transpose(&self, w: &HVector<T>) -> Result<Vec<T>> {
        if w.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: w.dim(),
            });
        }
        let d = self.d;
        let mut out = w.components().to_vec();
        let mut vt = T::zero();
        for j in 0..d {
            vt = vt + T::int(2) * (self.y[j] * w.x_part()[j] - self.x[j] * w.y_part()[j]);
        }
        out.push(vt);
        Ok(out)
    }
}
