use serde::{Deserialize, Serialize};

use super::{check_d, cubic_root, dm1, min_max_crossing, root_tol};
use crate::error::{Error, Result};
use crate::numerics::{coordinate_descent_2d, minimize_on_log_scale};
use crate::scalar::Real;

fn check_unit<T: Real>(name: &str, b: T) -> Result<()> {
    if !(b >= T::zero() && b < T::one()) {
        return Err(Error::Domain(format!("{name} = {} must lie in [0, 1)", b.to_f64_lossy())));
    }
    Ok(())
}

/// The expression minimised over `γ` in `K_{d,b}(δ)`.
pub fn k_db_objective<T: Real>(d: usize, delta: T, b: T, gamma: T) -> T {
    let m = dm1::<T>(d);
    let beta = T::one() - b * b;
    let s = delta.sqrt();
    let a = T::from_usize(8 * d - 6).unwrap() + gamma * s;
    a / (T::int(4) * m * beta) + (a * a / (T::int(16) * m * m * beta * beta) + s / (T::int(2) * gamma * beta)).sqrt()
}

/// `K_{d,b}(δ)` with its minimizing `γ`.
pub fn k_db_argmin<T: Real>(d: usize, delta: T, b: T) -> Result<(T, T)> {
    check_d(d)?;
    check_unit("b", b)?;
    if !(delta > T::zero()) {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let m = minimize_on_log_scale(|g| k_db_objective(d, delta, b, g), T::lit(1e-3), T::lit(1e2), 61, root_tol::<T>());
    Ok((m.value, m.x))
}

/// `K_{d,b}(δ)` by golden-section minimization over `γ > 0`.
pub fn k_db<T: Real>(d: usize, delta: T, b: T) -> Result<T> {
    k_db_argmin(d, delta, b).map(|(v, _)| v)
}

/// Stationary point of the `K_{d,b}` objective in closed form: the minimum is
/// `(d−1)/γ²` with `√δ γ³ + (4d−3)γ² = (1−b²)(d−1)²`. Used as a cross-check.
pub fn k_db_stationary<T: Real>(d: usize, delta: T, b: T) -> Result<(T, T)> {
    check_d(d)?;
    check_unit("b", b)?;
    let m = dm1::<T>(d);
    let g = cubic_root(d, delta, (T::one() - b * b) * m * m)?;
    Ok((m / (g * g), g))
}

/// `g_{d,δ,b₂}(γ₁, γ₂)`; `+∞` outside `γ₁ > 0, 0 < γ₂ < 1`.
pub fn g_schifo<T: Real>(d: usize, delta: T, b2: T, g1: T, g2: T) -> T {
    if !(g1 > T::zero() && g2 > T::zero() && g2 < T::one()) {
        return T::infinity();
    }
    let m = dm1::<T>(d);
    let beta = T::one() - b2 * b2;
    let s = delta.sqrt();
    let q = s / (T::int(8) * m * g2);
    let num = (T::from_usize(4 * d - 3).unwrap() + g1 * s / T::int(2)) + q * q / beta;
    let den = T::one() - g2 * g2;
    let a = num / (m * beta * den);
    a + (a * a + (s / (T::int(2) * g1)) / (beta * den)).sqrt()
}

/// Minimum of `g` with its location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MdbMinimum<T> {
    pub value: T,
    pub gamma1: T,
    pub gamma2: T,
}

/// `M_{d,b₂}(δ) = min g_{d,δ,b₂}(γ₁, γ₂)` over `γ₁ > 0, 0 < γ₂ < 1`.
///
/// Coordinate descent in `(ln γ₁, γ₂)` with golden-section line searches,
/// started from every node of an 8×8 grid (log-spaced in γ₁, uniform in γ₂).
pub fn m_db2<T: Real>(d: usize, delta: T, b2: T) -> Result<MdbMinimum<T>> {
    check_d(d)?;
    check_unit("b2", b2)?;
    if !(delta > T::zero()) {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let f = |u: T, g2: T| g_schifo(d, delta, b2, u.exp(), g2);
    let bounds = [(T::int(-40), T::int(40)), (T::lit(1e-9), T::one() - T::lit(1e-9))];
    let tol = T::epsilon().sqrt() * T::lit(1e-2);
    let mut best = MdbMinimum {
        value: T::infinity(),
        gamma1: T::nan(),
        gamma2: T::nan(),
    };
    for i in 0..8 {
        // γ₁ from 1e-3 to 1e3
        let u0 = T::lit(1e-3).ln() + T::from_usize(i).unwrap() * T::lit(1e6).ln() / T::int(7);
        for j in 0..8 {
            let g20 = (T::from_usize(j).unwrap() + T::lit(0.5)) / T::int(8);
            let (u, g2, v) = coordinate_descent_2d(f, (u0, g20), bounds, tol, 400);
            if v < best.value {
                best = MdbMinimum {
                    value: v,
                    gamma1: u.exp(),
                    gamma2: g2,
                };
            }
        }
    }
    if !best.value.is_finite() {
        return Err(Error::Domain("M_{d,b2} minimization diverged".into()));
    }
    Ok(best)
}

/// Location and value of a min–max over the cone opening `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing<T> {
    pub value: T,
    pub delta: T,
    /// Difference of the two branches at `delta` (≈ 0).
    pub branch_gap: T,
}

/// `κ_{d,b} = min_δ max{(1+1/δ)/(d−1)², K_{d,b}(δ)/(d−1)}`.
pub fn kappa_db<T: Real>(d: usize, b: T) -> Result<Crossing<T>> {
    check_d(d)?;
    check_unit("b", b)?;
    let m = dm1::<T>(d);
    let branches = |x: T| -> Result<(T, T)> { Ok(((T::one() + T::one() / x) / (m * m), k_db(d, x, b)? / m)) };
    let delta = min_max_crossing(|x: T| branches(x).map(|(a, c)| a - c))?;
    let (a, c) = branches(delta)?;
    Ok(Crossing {
        value: a.max(c),
        delta,
        branch_gap: (a - c).abs(),
    })
}

/// `μ_{d,b₁,b₂} = min_δ max{(1+1/δ)/((d−1)²(1−b₁²)), M_{d,b₂}(δ)/(d−1)}`.
pub fn mu<T: Real>(d: usize, b1: T, b2: T) -> Result<Crossing<T>> {
    check_d(d)?;
    check_unit("b1", b1)?;
    check_unit("b2", b2)?;
    let m = dm1::<T>(d);
    let branches = |x: T| -> Result<(T, T)> {
        Ok((
            (T::one() + T::one() / x) / (m * m * (T::one() - b1 * b1)),
            m_db2(d, x, b2)?.value / m,
        ))
    };
    let delta = min_max_crossing(|x: T| branches(x).map(|(a, c)| a - c))?;
    let (a, c) = branches(delta)?;
    Ok(Crossing {
        value: a.max(c),
        delta,
        branch_gap: (a - c).abs(),
    })
}

fn b3_a<T: Real>(d: usize, b1: T) -> T {
    let m = dm1::<T>(d);
    T::one() / (T::int(8) * m) + (T::from_usize(2 * d).unwrap() - T::lit(1.5)) * (T::one() - b1 * b1).sqrt()
}

fn b3_c<T: Real>(d: usize, b1: T, b2: T) -> T {
    dm1::<T>(d) * (T::one() - b2 * b2) * (T::one() - b1 * b1).sqrt()
}

/// Admissibility bound for `b₃` as stated: `A + √(A² + (d−1)(1−b₂²)√(1−b₁²))`
/// with `A = 1/(8(d−1)) + (2d − 3/2)√(1−b₁²)`.
pub fn b3_bound<T: Real>(d: usize, b1: T, b2: T) -> Result<T> {
    check_d(d)?;
    check_unit("b1", b1)?;
    check_unit("b2", b2)?;
    let a = b3_a(d, b1);
    Ok(a + (a * a + b3_c(d, b1, b2)).sqrt())
}

/// Positive root `−A + √(A² + C)` of `b₃² + 2A b₃ − C = 0`: the largest `b₃`
/// for which the `δ̃` window is nonempty.
pub fn b3_window_threshold<T: Real>(d: usize, b1: T, b2: T) -> Result<T> {
    check_d(d)?;
    check_unit("b1", b1)?;
    check_unit("b2", b2)?;
    let a = b3_a(d, b1);
    let c = b3_c(d, b1, b2);
    // Cancellation-free form of −A + √(A² + C).
    Ok(c / (a + (a * a + c).sqrt()))
}

/// Admissible interval of cone openings in the complex-potential argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window<T> {
    Empty,
    Interval { lower: T, upper: T },
}

impl<T: Real> Window<T> {
    pub fn is_empty(&self) -> bool {
        matches!(self, Window::Empty)
    }
}

/// `lower = b₃/((d−1)(1−b₁²))`,
/// `upper = ((d−1)/b₃)(1 − b₂² − (4d−3)b₃/(d−1))² (1/(4(d−1)) + b₃)⁻²`.
pub fn delta_tilde_window<T: Real>(d: usize, b1: T, b2: T, b3: T) -> Result<Window<T>> {
    check_d(d)?;
    check_unit("b1", b1)?;
    check_unit("b2", b2)?;
    if b3 == T::zero() {
        return Err(Error::DegenerateInput("b3 = 0: every opening delta > 0 is admissible".into()));
    }
    if b3 < T::zero() {
        return Err(Error::Domain("b3 must be nonnegative".into()));
    }
    let m = dm1::<T>(d);
    let lower = b3 / (m * (T::one() - b1 * b1));
    let base = T::one() - b2 * b2 - T::from_usize(4 * d - 3).unwrap() / m * b3;
    if base <= T::zero() {
        return Ok(Window::Empty);
    }
    let tail = T::one() / (T::int(4) * m) + b3;
    let upper = m / b3 * base * base / (tail * tail);
    if lower >= upper {
        return Ok(Window::Empty);
    }
    Ok(Window::Interval { lower, upper })
}

/// Perturbed constants for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedConstants {
    pub d: usize,
    pub delta: f64,
    pub b: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub k_db: f64,
    pub k_db_gamma: f64,
    pub m_db2: MdbMinimum<f64>,
    pub kappa_db: Crossing<f64>,
    pub mu: Crossing<f64>,
    pub b3_bound: f64,
    pub b3_window_threshold: f64,
    pub delta_tilde_window: Option<Window<f64>>,
}

pub fn perturbed_constants(d: usize, delta: f64, b: f64, b1: f64, b2: f64, b3: f64) -> Result<PerturbedConstants> {
    let (k, kg) = k_db_argmin(d, delta, b)?;
    let window = match delta_tilde_window(d, b1, b2, b3) {
        Ok(w) => Some(w),
        Err(Error::DegenerateInput(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(PerturbedConstants {
        d,
        delta,
        b,
        b1,
        b2,
        b3,
        k_db: k,
        k_db_gamma: kg,
        m_db2: m_db2(d, delta, b2)?,
        kappa_db: kappa_db(d, b)?,
        mu: mu(d, b1, b2)?,
        b3_bound: b3_bound(d, b1, b2)?,
        b3_window_threshold: b3_window_threshold(d, b1, b2)?,
        delta_tilde_window: window,
    })
}
