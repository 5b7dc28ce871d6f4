//! Hardy inequalities on ℍᵈ: Rayleigh quotients over closed-form fields,
//! the divergence-field inequality, and a sharpness probe on radial profiles.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{builtin_family, Decay, Estimate, Quadrature, RadialProduct, TestField};
use crate::hgroup::{sigma_h_norm, ClosedForm, Jet, VectorField};

/// Homogeneous dimension `Q = 2d + 2`.
pub fn homogeneous_dimension(d: usize) -> usize {
    2 * d + 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HardyKind {
    /// `∫|f|²|z|²/N⁴ ≤ (2/(Q−2))² ∫|∇_H f|²`
    #[serde(rename = "GL")]
    GarofaloLanconelli,
    /// `∫|f|²/|z|² ≤ (d−1)⁻² ∫|∇_H f|²`
    Horizontal,
    /// `∫|f|²/|z| ≤ (2/(2d−1))² ∫|z||∇_H f|²`
    WeightedHorizontal,
    /// `∫|f|^p |div_H h| ≤ p^p ∫|σh|^p |div_H h|^{1−p} |∇_H f|^p`
    General,
}

impl HardyKind {
    pub const QUOTIENTS: [HardyKind; 3] =
        [HardyKind::GarofaloLanconelli, HardyKind::Horizontal, HardyKind::WeightedHorizontal];

    pub fn min_dim(self) -> usize {
        match self {
            HardyKind::Horizontal => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HardyKind::GarofaloLanconelli => "GL",
            HardyKind::Horizontal => "horizontal",
            HardyKind::WeightedHorizontal => "weighted-horizontal",
            HardyKind::General => "general",
        }
    }
}

impl std::str::FromStr for HardyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "GL" | "gl" => Ok(HardyKind::GarofaloLanconelli),
            "horizontal" => Ok(HardyKind::Horizontal),
            "weighted-horizontal" => Ok(HardyKind::WeightedHorizontal),
            "general" => Ok(HardyKind::General),
            _ => Err(Error::Domain(format!("unknown Hardy inequality '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardySpec {
    pub name: HardyKind,
    pub d: usize,
    pub left_weight: String,
    pub right_weight: String,
    pub constant: f64,
    pub q: usize,
    pub p: f64,
    pub min_dim: usize,
}

impl HardySpec {
    pub fn new(name: HardyKind, d: usize) -> Result<Self> {
        if name == HardyKind::General {
            return Self::general(d, 2.0);
        }
        if d < name.min_dim() {
            return Err(Error::Domain(format!("{} needs d >= {}, got {d}", name.name(), name.min_dim())));
        }
        let df = d as f64;
        let q = homogeneous_dimension(d);
        let (lw, rw, c) = match name {
            HardyKind::GarofaloLanconelli => ("|z|^2/N^4", "1", (2.0 / (q as f64 - 2.0)).powi(2)),
            HardyKind::Horizontal => ("|z|^-2", "1", 1.0 / ((df - 1.0) * (df - 1.0))),
            HardyKind::WeightedHorizontal => ("|z|^-1", "|z|", (2.0 / (2.0 * df - 1.0)).powi(2)),
            HardyKind::General => unreachable!(),
        };
        Ok(Self {
            name,
            d,
            left_weight: lw.into(),
            right_weight: rw.into(),
            constant: c,
            q,
            p: 2.0,
            min_dim: name.min_dim(),
        })
    }

    /// The divergence-field inequality with exponent `p ∈ (1, 4]`.
    pub fn general(d: usize, p: f64) -> Result<Self> {
        if d < 1 {
            return Err(Error::Domain("d must be at least 1".into()));
        }
        if !(p > 1.0 && p <= 4.0) {
            return Err(Error::Domain(format!("exponent p = {p} outside (1, 4]")));
        }
        Ok(Self {
            name: HardyKind::General,
            d,
            left_weight: "|div_H h|".into(),
            right_weight: "|sigma h|^p |div_H h|^(1-p)".into(),
            constant: p.powf(p),
            q: homogeneous_dimension(d),
            p,
            min_dim: 1,
        })
    }

    /// Specs with a closed-form quotient that apply in dimension `d`.
    pub fn all_quotients(d: usize) -> Vec<HardySpec> {
        HardyKind::QUOTIENTS.iter().filter_map(|&k| HardySpec::new(k, d).ok()).collect()
    }

    /// Pointwise `(left, right)` weights at `(|z|, t)`.
    pub fn weights(&self, r: f64, t: f64) -> (f64, f64) {
        match self.name {
            HardyKind::GarofaloLanconelli => {
                let n4 = r.powi(4) + t * t;
                (r * r / n4, 1.0)
            }
            HardyKind::Horizontal => (1.0 / (r * r), 1.0),
            HardyKind::WeightedHorizontal => (1.0 / r, r),
            HardyKind::General => (1.0, 1.0),
        }
    }
}

/// A Hardy verdict: `lhs ≤ rhs = constant · (right integral)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyVerdict {
    pub spec: String,
    #[serde(rename = "member-id")]
    pub member: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub margin: f64,
    pub quad_error: f64,
    pub quotient: f64,
    pub pass: bool,
}

impl HardyVerdict {
    fn new(spec: String, member: &str, constant: f64, left: (f64, f64), right: (f64, f64)) -> Self {
        let rhs = constant * right.0;
        let quad_error = left.1 + constant * right.1;
        HardyVerdict {
            spec,
            member: member.into(),
            lhs: left.0,
            rhs,
            constant,
            margin: rhs - left.0,
            quad_error,
            quotient: if right.0 > 0.0 { left.0 / right.0 } else { f64::INFINITY },
            pass: left.0 <= rhs + 3.0 * quad_error,
        }
    }
}

/// Relative refinement gap above which [`quotient`] reports an accuracy failure.
pub const HARDY_ACCURACY: f64 = 1e-3;

/// Left and right integrals of every quotient spec, from one quadrature pass:
/// `[GL left, horizontal left, weighted left, ∫|∇f|², ∫|z||∇f|²]` at both levels.
fn hardy_integrals(f: &TestField, q: &Quadrature) -> (Vec<f64>, Vec<f64>) {
    let d = f.dim();
    let mut jet = Jet::new(d);
    let mut g = vec![Complex64::new(0.0, 0.0); 2 * d];
    q.integrate_levels(d, &f.decay, 5, |p, r, out| {
        f.jet_into(p, 1, &mut jet);
        jet.horizontal_into(p, &mut g);
        let f2 = jet.value.norm_sqr();
        let g2: f64 = g.iter().map(|c| c.norm_sqr()).sum();
        let t = p[2 * d];
        out[0] = f2 * r * r / (r.powi(4) + t * t);
        out[1] = f2 / (r * r);
        out[2] = f2 / r;
        out[3] = g2;
        out[4] = r * g2;
    })
}

fn slots(kind: HardyKind) -> (usize, usize) {
    match kind {
        HardyKind::GarofaloLanconelli => (0, 3),
        HardyKind::Horizontal => (1, 3),
        HardyKind::WeightedHorizontal => (2, 4),
        HardyKind::General => unreachable!(),
    }
}

fn check_spec(spec: &HardySpec, f: &TestField) -> Result<()> {
    if spec.name == HardyKind::General {
        return Err(Error::Domain("the general inequality needs a vector field; use verify_general".into()));
    }
    if f.dim() != spec.d {
        return Err(Error::DimensionMismatch { expected: spec.d, got: f.dim() });
    }
    Ok(())
}

/// Rayleigh quotient (left integral ÷ right integral) with its error estimate.
pub fn quotient(spec: &HardySpec, f: &TestField, q: &Quadrature) -> Result<Estimate> {
    check_spec(spec, f)?;
    let (fine, coarse) = hardy_integrals(f, q);
    let (a, b) = slots(spec.name);
    let qf = fine[a] / fine[b];
    let qc = coarse[a] / coarse[b];
    if !qf.is_finite() || (qf - qc).abs() > HARDY_ACCURACY * qf.abs() {
        return Err(Error::Accuracy { coarse: qc, fine: qf });
    }
    Ok(Estimate { value: qf, error: (qf - qc).abs() })
}

/// Verdicts of every quotient spec applicable in the member's dimension.
pub fn verify_member(f: &TestField, q: &Quadrature) -> Vec<HardyVerdict> {
    let d = f.dim();
    let (fine, coarse) = hardy_integrals(f, q);
    HardySpec::all_quotients(d)
        .into_iter()
        .map(|s| {
            let (a, b) = slots(s.name);
            HardyVerdict::new(
                s.name.name().into(),
                &f.id,
                s.constant,
                (fine[a], (fine[a] - coarse[a]).abs()),
                (fine[b], (fine[b] - coarse[b]).abs()),
            )
        })
        .collect()
}

pub fn verify(spec: &HardySpec, f: &TestField, q: &Quadrature) -> Result<HardyVerdict> {
    check_spec(spec, f)?;
    verify_member(f, q)
        .into_iter()
        .find(|v| v.spec == spec.name.name())
        .ok_or_else(|| Error::Domain(format!("{} does not apply at d = {}", spec.name.name(), spec.d)))
}

/// Members of the built-in family for seeds `seed, seed+1, …` until `count`
/// members are collected.
pub fn hardy_family(d: usize, seed: u64, count: usize) -> Vec<TestField> {
    let mut out = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        out.extend(builtin_family(d, s).into_iter().take(count - out.len()));
        s += 1;
    }
    out
}

/// Family-quantified Hardy suite.
pub fn hardy_suite(d: usize, seed: u64, count: usize, q: &Quadrature) -> Vec<HardyVerdict> {
    hardy_family(d, seed, count).iter().flat_map(|f| verify_member(f, q)).collect()
}

/// `∫|u|^p |div_H h| ≤ p^p ∫|σh|^p |div_H h|^{1−p} |∇_H u|^p`. Fails with
/// [`Error::HypothesisViolation`] at the first node where `div_H h ≤ 0`.
pub fn verify_general(h: &impl VectorField<f64>, f: &TestField, p: f64, q: &Quadrature) -> Result<HardyVerdict> {
    let spec = HardySpec::general(f.dim(), p)?;
    let d = f.dim();
    if h.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: h.dim() });
    }
    let n = 2 * d + 1;
    let mut jet = Jet::new(d);
    let mut g = vec![Complex64::new(0.0, 0.0); 2 * d];
    let mut hv = vec![0.0; n];
    let mut jac = vec![0.0; n * n];
    let mut bad: Option<(Vec<f64>, f64)> = None;
    let (fine, coarse) = q.integrate_levels(d, &f.decay, 2, |x, _, out| {
        h.eval(x, &mut hv, &mut jac);
        let div = crate::hgroup::div_horizontal_from(d, x, &hv, &jac);
        if !(div > 0.0) {
            if bad.is_none() {
                bad = Some((x.to_vec(), div));
            }
            out[0] = 0.0;
            out[1] = 0.0;
            return;
        }
        f.jet_into(x, 1, &mut jet);
        jet.horizontal_into(x, &mut g);
        let gn = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let sh = sigma_h_norm(d, x, &hv);
        out[0] = jet.value.norm().powf(p) * div;
        out[1] = sh.powf(p) * div.powf(1.0 - p) * gn.powf(p);
    });
    if let Some((x, div)) = bad {
        return Err(Error::HypothesisViolation(format!("div_H h = {div:e} <= 0 at {x:?}")));
    }
    Ok(HardyVerdict::new(
        format!("general[p={p}]"),
        &f.id,
        spec.constant,
        (fine[0], (fine[0] - coarse[0]).abs()),
        (fine[1], (fine[1] - coarse[1]).abs()),
    ))
}

/// `|z|^α e^{−a|z|²} e^{−bt²}` as a test field.
pub fn radial_profile(d: usize, alpha: f64, a: f64, b: f64) -> TestField {
    let mut f = TestField::new(
        format!("radial[alpha={alpha},a={a},b={b}]"),
        Arc::new(RadialProduct { d, alpha, a, b }),
        Decay::gaussian(a, b, alpha.max(0.0).ceil() as usize),
    );
    f.vanishes_on_axis = alpha > 0.0;
    f
}

/// Quotient of a radial profile in closed form (Gamma functions); only the
/// separable specs (horizontal, weighted-horizontal) have one.
pub fn radial_profile_quotient(kind: HardyKind, d: usize, alpha: f64, a: f64, b: f64) -> Result<f64> {
    // ∫₀^∞ r^β e^{−2ar²} dr
    let i = |beta: f64| {
        let s = (beta + 1.0) / 2.0;
        (libm::lgamma(s) - s * (2.0 * a).ln()).exp() / 2.0
    };
    let m = 2.0 * d as f64 - 1.0;
    // the t-factor of |∇_H f|² relative to ∫h²: ∫h'² = b ∫h²
    let (num_pow, w) = match kind {
        HardyKind::Horizontal => (2.0 * alpha + m - 2.0, 0.0),
        HardyKind::WeightedHorizontal => (2.0 * alpha + m - 1.0, 1.0),
        _ => return Err(Error::Capability(format!("no closed form for {}", kind.name()))),
    };
    if d < kind.min_dim() {
        return Err(Error::Domain(format!("{} needs d >= {}", kind.name(), kind.min_dim())));
    }
    if !(num_pow > -1.0 && a > 0.0 && b > 0.0) {
        return Err(Error::Domain("profile is not in the energy space".into()));
    }
    let base = 2.0 * alpha + m + w;
    let den = alpha * alpha * i(base - 2.0) - 4.0 * a * alpha * i(base) + 4.0 * a * a * i(base + 2.0)
        + 4.0 * b * i(base + 2.0);
    Ok(i(num_pow) / den)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub spec: String,
    pub d: usize,
    pub constant: f64,
    pub points: Vec<ProbePoint>,
    pub best: f64,
    /// `constant − best`.
    pub gap: f64,
}

/// Critical exponent `α_c`: the profiles `|z|^{−α_c+ε}` approach the constant as `ε → 0`.
pub fn critical_exponent(kind: HardyKind, d: usize) -> Option<f64> {
    match kind {
        HardyKind::Horizontal => Some(d as f64 - 1.0),
        HardyKind::WeightedHorizontal => Some(d as f64 - 0.5),
        _ => None,
    }
}

/// Sweeps `|z|^{−α_c+ε} e^{−a|z|²} e^{−bt²}` over `eps` (separable specs, closed
/// form) or Gaussians `e^{−a|z|²−bt²}` over `rates` (GL, by quadrature).
pub fn sharpness_probe(spec: &HardySpec, eps: &[f64], rates: &[(f64, f64)], q: &Quadrature) -> Result<SharpnessReport> {
    let d = spec.d;
    let mut points = Vec::new();
    match critical_exponent(spec.name, d) {
        Some(ac) => {
            for &e in eps {
                for &(a, b) in rates {
                    let alpha = -ac + e;
                    points.push(ProbePoint {
                        alpha,
                        a,
                        b,
                        quotient: radial_profile_quotient(spec.name, d, alpha, a, b)?,
                    });
                }
            }
        }
        None => {
            for &(a, b) in rates {
                let f = radial_profile(d, 0.0, a, b);
                points.push(ProbePoint {
                    alpha: 0.0,
                    a,
                    b,
                    quotient: quotient(spec, &f, q)?.value,
                });
            }
        }
    }
    let best = points.iter().map(|p| p.quotient).fold(0.0, f64::max);
    Ok(SharpnessReport {
        spec: spec.name.name().into(),
        d,
        constant: spec.constant,
        points,
        best,
        gap: spec.constant - best,
    })
}

/// Default sweep: `ε ∈ {0.8, 0.4, …, 0.0125}` at `a = 1`, `b ∈ {1, 0.01}`.
pub fn default_sweep() -> (Vec<f64>, Vec<(f64, f64)>) {
    (
        vec![0.8, 0.4, 0.2, 0.1, 0.05, 0.025, 0.0125],
        vec![(1.0, 1.0), (1.0, 0.01)],
    )
}
