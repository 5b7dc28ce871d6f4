//! Explicit constants of the uniform resolvent estimates: `γ_δ`, `K_d(δ)`,
//! `δ*`, `κ_d`, and their perturbed versions with potentials.
//!
//! Every constant is computed from its defining equation; independent
//! definitions are cross-checked and disagreement is reported as
//! [`Error::InternalConsistency`].

mod perturbed;

pub use perturbed::{
    b3_bound, b3_window_threshold, delta_tilde_window, g_schifo, k_db, k_db_argmin, k_db_objective, k_db_stationary, kappa_db, m_db2, mu,
    perturbed_constants, Crossing, MdbMinimum, PerturbedConstants, Window,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bisect, expand_bracket, minimize_on_log_scale, newton_bisect};
use crate::scalar::Real;

/// Cross-definition tolerance: 1e−9 in double precision, looser for `f32`.
pub fn consistency_tol<T: Real>() -> T {
    (T::epsilon() * T::lit(1e3)).max(T::lit(1e-9))
}

fn root_tol<T: Real>() -> T {
    (T::epsilon() * T::int(8)).max(T::lit(1e-15))
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    Ok(())
}

fn dm1<T: Real>(d: usize) -> T {
    T::from_usize(d - 1).unwrap()
}

fn four_d_m3<T: Real>(d: usize) -> T {
    T::from_usize(4 * d - 3).unwrap()
}

/// Positive root of `√δ γ³ + (4d−3) γ² − c = 0` on `[0, √(c/(4d−3))]`.
pub(crate) fn cubic_root<T: Real>(d: usize, delta: T, c: T) -> Result<T> {
    let s = delta.sqrt();
    let a = four_d_m3::<T>(d);
    let hi = (c / a).sqrt();
    if delta == T::zero() {
        return Ok(hi);
    }
    let f = |g: T| (s * g * g * g + a * g * g - c, T::int(3) * s * g * g + T::int(2) * a * g);
    newton_bisect(f, T::zero(), hi, root_tol::<T>() * hi)
}

/// `γ_δ`: the unique positive root of `√δ γ³ + (4d−3)γ² − (d−1)² = 0`.
pub fn gamma_delta<T: Real>(d: usize, delta: T) -> Result<T> {
    check_d(d)?;
    if delta < T::zero() || !delta.is_finite() {
        return Err(Error::Domain(format!("delta = {} must be finite and >= 0", delta.to_f64_lossy())));
    }
    let m = dm1::<T>(d);
    cubic_root(d, delta, m * m)
}

/// Residual of the cubic at `γ`.
pub fn cubic_residual<T: Real>(d: usize, delta: T, gamma: T) -> T {
    let m = dm1::<T>(d);
    delta.sqrt() * gamma.powi(3) + four_d_m3::<T>(d) * gamma * gamma - m * m
}

/// The expression minimised over `γ > 0` in the definition of `K_d(δ)`.
pub fn k_d_objective<T: Real>(d: usize, delta: T, gamma: T) -> T {
    let m = dm1::<T>(d);
    let s = delta.sqrt();
    let a = T::from_usize(8 * d - 6).unwrap() + gamma * s;
    a / (T::int(4) * m) + (a * a / (T::int(16) * m * m) + s / (T::int(2) * gamma)).sqrt()
}

/// `K_d(δ)` by the implicit equation `√(δ(d−1)) K^{−3/2} + (4d−3) K^{−1} = d−1`.
pub fn k_d_implicit<T: Real>(d: usize, delta: T) -> Result<T> {
    check_d(d)?;
    let m = dm1::<T>(d);
    let a = four_d_m3::<T>(d);
    let c = (delta * m).sqrt();
    let f = |k: T| c * k.powf(T::lit(-1.5)) + a / k - m;
    let lo = a / m;
    let hi = expand_bracket(f, lo, lo * T::int(2), T::int(2))?;
    bisect(f, lo, hi, root_tol::<T>() * hi)
}

/// `K_d(δ)` by direct golden-section minimization of its defining expression.
pub fn k_d_direct<T: Real>(d: usize, delta: T) -> Result<T> {
    check_d(d)?;
    let m = minimize_on_log_scale(|g| k_d_objective(d, delta, g), T::lit(1e-3), T::lit(1e2), 61, root_tol::<T>());
    Ok(m.value)
}

/// All three evaluations of `K_d(δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdValues<T> {
    pub from_cubic: T,
    pub direct: T,
    pub implicit: T,
    pub gamma: T,
}

impl<T: Real> KdValues<T> {
    pub fn max_residual(&self) -> T {
        let a = (self.from_cubic - self.direct).abs();
        let b = (self.from_cubic - self.implicit).abs();
        let c = (self.direct - self.implicit).abs();
        a.max(b).max(c) / self.from_cubic
    }
}

pub fn k_d_all<T: Real>(d: usize, delta: T) -> Result<KdValues<T>> {
    let gamma = gamma_delta(d, delta)?;
    Ok(KdValues {
        from_cubic: dm1::<T>(d) / (gamma * gamma),
        direct: k_d_direct(d, delta)?,
        implicit: k_d_implicit(d, delta)?,
        gamma,
    })
}

/// `K_d(δ) = (d−1)/γ_δ²`, verified against direct minimization and the
/// implicit equation (relative agreement within [`consistency_tol`]).
#[allow(non_snake_case)]
pub fn K_d<T: Real>(d: usize, delta: T) -> Result<T> {
    if !(delta > T::zero()) {
        return Err(Error::Domain(format!("delta = {} must be positive", delta.to_f64_lossy())));
    }
    let v = k_d_all(d, delta)?;
    let tol = consistency_tol::<T>();
    if v.max_residual() > tol {
        return Err(Error::InternalConsistency {
            what: format!("K_d(d={d}, delta={})", delta.to_f64_lossy()),
            values: vec![v.from_cubic.to_f64_lossy(), v.direct.to_f64_lossy(), v.implicit.to_f64_lossy()],
            tol: tol.to_f64_lossy(),
        });
    }
    Ok(v.from_cubic)
}

/// Left side minus right side of `δ²/√(1+δ) + 4δ = 1/(d−1)`.
pub fn delta_star_residual<T: Real>(d: usize, delta: T) -> T {
    delta * delta / (T::one() + delta).sqrt() + T::int(4) * delta - T::one() / dm1::<T>(d)
}

/// `δ*`, the opening at which both branches of the `κ_d` min–max coincide.
pub fn delta_star<T: Real>(d: usize) -> Result<T> {
    check_d(d)?;
    let f = |x: T| delta_star_residual(d, x);
    let hi = expand_bracket(f, T::zero(), T::one() / (T::int(4) * dm1::<T>(d)), T::int(2))?;
    bisect(f, T::zero(), hi, root_tol::<T>() * hi)
}

/// `κ_d = (1 + 1/δ*)/(d−1)²`.
pub fn kappa_from_delta_star<T: Real>(d: usize) -> Result<T> {
    let ds = delta_star::<T>(d)?;
    let m = dm1::<T>(d);
    Ok((T::one() + T::one() / ds) / (m * m))
}

/// `κ_d` as the root of `κ⁻²/√((d−1)² − κ⁻¹) + (4d−3)κ⁻¹ = (d−1)²`, `κ⁻¹ < (d−1)²`.
pub fn kappa_from_equation<T: Real>(d: usize) -> Result<T> {
    check_d(d)?;
    let m2 = dm1::<T>(d).powi(2);
    let a = four_d_m3::<T>(d);
    let f = |x: T| x * x / (m2 - x).sqrt() + a * x - m2;
    let hi = m2 * (T::one() - T::epsilon() * T::int(4));
    let x = bisect(f, T::zero(), hi, root_tol::<T>() * m2)?;
    Ok(T::one() / x)
}

/// Branches `(1 + 1/δ)/(d−1)²` (decreasing) and `K_d(δ)/(d−1)` (increasing).
pub fn kappa_branches<T: Real>(d: usize, delta: T) -> Result<(T, T)> {
    let m = dm1::<T>(d);
    let gamma = gamma_delta(d, delta)?;
    Ok(((T::one() + T::one() / delta) / (m * m), m / (gamma * gamma) / m))
}

/// Minimum over `δ > 0` of the max of a decreasing and an increasing branch,
/// located as the sign change of their difference (log-grid scan, then bisection).
pub(crate) fn min_max_crossing<T: Real>(mut diff: impl FnMut(T) -> Result<T>) -> Result<T> {
    let mut lo = T::lit(1e-6);
    let mut hi = T::lit(1e3);
    let n = 40;
    let step = (hi / lo).ln() / T::from_usize(n).unwrap();
    let mut prev = (lo, diff(lo)?);
    if prev.1 <= T::zero() {
        return Err(Error::Domain("min-max crossing below scan range".into()));
    }
    let mut found = false;
    for i in 1..=n {
        let x = lo * (step * T::from_usize(i).unwrap()).exp();
        let v = diff(x)?;
        if v <= T::zero() {
            lo = prev.0;
            hi = x;
            found = true;
            break;
        }
        prev = (x, v);
    }
    if !found {
        return Err(Error::Domain("min-max crossing above scan range".into()));
    }
    // Bisection in log δ keeps relative accuracy at small δ.
    let mut err = None;
    let u = bisect(
        |u: T| match diff(u.exp()) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                T::zero()
            }
        },
        lo.ln(),
        hi.ln(),
        root_tol::<T>(),
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(u.exp())
}

/// `κ_d` as `min_δ max{(1+1/δ)/(d−1)², K_d(δ)/(d−1)}`; returns `(κ, argmin δ)`.
pub fn kappa_min_max<T: Real>(d: usize) -> Result<(T, T)> {
    check_d(d)?;
    let delta = min_max_crossing(|x: T| kappa_branches(d, x).map(|(a, b)| a - b))?;
    let (a, b) = kappa_branches(d, delta)?;
    Ok((a.max(b), delta))
}

/// Naive lower bound `4/(d−1) + 1/(d−1)²` for `κ_d`.
pub fn kappa_lower_bound<T: Real>(d: usize) -> T {
    let m = dm1::<T>(d);
    T::int(4) / m + T::one() / (m * m)
}

/// `c^{3/2}√δ*/√(d−1) + c(4d−3)/(d−1) − 1` with `c = 1/((d−1)κ_d)`; vanishes exactly.
pub fn threshold_identity_residual<T: Real>(d: usize) -> Result<T> {
    let m = dm1::<T>(d);
    let kappa = kappa_from_delta_star::<T>(d)?;
    let ds = delta_star::<T>(d)?;
    let c = T::one() / (m * kappa);
    Ok(c.powf(T::lit(1.5)) * ds.sqrt() / m.sqrt() + c * four_d_m3::<T>(d) / m - T::one())
}

/// All free constants for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub d: usize,
    pub delta_star: f64,
    pub gamma_delta_star: f64,
    /// `(1 + 1/δ*)/(d−1)²`.
    pub kappa_def2: f64,
    /// Root of the κ-equation.
    pub kappa_equation: f64,
    /// Min–max over δ.
    pub kappa_min_max: f64,
    pub delta_min_max: f64,
    pub residual_def2_equation: f64,
    pub residual_def2_min_max: f64,
    pub residual_equation_min_max: f64,
    pub kappa_lower_bound: f64,
    pub threshold_identity_residual: f64,
}

impl ConstantsReport {
    pub fn kappa(&self) -> f64 {
        self.kappa_def2
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_def2_equation
            .max(self.residual_def2_min_max)
            .max(self.residual_equation_min_max)
    }
}

/// Computes `κ_d` three ways and fills a [`ConstantsReport`]; fails when the
/// definitions disagree by more than 1e−9 (relative).
pub fn kappa_d(d: usize) -> Result<ConstantsReport> {
    let report = kappa_d_unchecked(d)?;
    let tol = consistency_tol::<f64>();
    if report.max_residual() > tol {
        return Err(Error::InternalConsistency {
            what: format!("kappa_d(d={d})"),
            values: vec![report.kappa_def2, report.kappa_equation, report.kappa_min_max],
            tol,
        });
    }
    Ok(report)
}

/// As [`kappa_d`] but returns the report even when residuals are large.
pub fn kappa_d_unchecked(d: usize) -> Result<ConstantsReport> {
    check_d(d)?;
    let ds = delta_star::<f64>(d)?;
    let k1 = kappa_from_delta_star::<f64>(d)?;
    let k2 = kappa_from_equation::<f64>(d)?;
    let (k3, dmm) = kappa_min_max::<f64>(d)?;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    Ok(ConstantsReport {
        d,
        delta_star: ds,
        gamma_delta_star: gamma_delta(d, ds)?,
        kappa_def2: k1,
        kappa_equation: k2,
        kappa_min_max: k3,
        delta_min_max: dmm,
        residual_def2_equation: rel(k1, k2),
        residual_def2_min_max: rel(k1, k3),
        residual_equation_min_max: rel(k2, k3),
        kappa_lower_bound: kappa_lower_bound(d),
        threshold_identity_residual: threshold_identity_residual::<f64>(d)?,
    })
}

/// One row of the `(d, δ*, κ_d)` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub d: usize,
    pub delta_star: f64,
    pub kappa_d: f64,
}

pub fn table(ds: &[usize]) -> Result<Vec<TableRow>> {
    ds.iter()
        .map(|&d| {
            let r = kappa_d(d)?;
            Ok(TableRow {
                d,
                delta_star: r.delta_star,
                kappa_d: r.kappa_def2,
            })
        })
        .collect()
}

/// Five-decimal mantissa, as in the printed table (`2.37340e-1`).
pub fn format_5(x: f64) -> String {
    format!("{x:.5e}")
}

/// Rounds to five decimals of the scientific mantissa.
pub fn round_5(x: f64) -> f64 {
    format_5(x).parse().expect("formatted float")
}

/// CSV with columns `d,delta_star,kappa_d` at five-decimal mantissa precision.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("d,delta_star,kappa_d\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.d, format_5(r.delta_star), format_5(r.kappa_d)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_zero_delta_is_quadratic_root() {
        for d in 2..8 {
            let g: f64 = gamma_delta(d, 0.0).unwrap();
            let expect = (d as f64 - 1.0) / ((4 * d - 3) as f64).sqrt();
            assert!((g - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn cubic_residual_small() {
        for &delta in &[1e-4, 0.1, 0.23734, 1.0, 7.0, 1e3] {
            let g: f64 = gamma_delta(3, delta).unwrap();
            assert!(cubic_residual(3, delta, g).abs() < 1e-10);
        }
    }

    #[test]
    fn f32_constants_are_close_to_f64() {
        let a: f32 = kappa_from_delta_star(2).unwrap();
        let b: f64 = kappa_from_delta_star(2).unwrap();
        assert!((a as f64 - b).abs() < 1e-4);
        let k: f32 = K_d(2, 0.5f32).unwrap();
        assert!((k as f64 - K_d(2, 0.5f64).unwrap()).abs() < 1e-3);
    }

    #[test]
    fn csv_layout() {
        let rows = table(&[2]).unwrap();
        let csv = table_csv(&rows);
        assert_eq!(csv, "d,delta_star,kappa_d\n2,2.37340e-1,5.21337e0\n");
    }
}
