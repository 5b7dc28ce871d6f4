//! Potentials `V(z, t)`, certified subordination/repulsivity bounds and the
//! eigenvalue-absence decisions built on them.
//!
//! Certified ("analytic") bounds come from a pointwise majorization
//! `w(z, t) ≤ C/|z|²` followed by the horizontal Hardy inequality, so
//! `∫ w|ψ|² ≤ C/(d−1)² ∫|∇_H ψ|²`. Empirical ("quotient-sup") bounds are
//! suprema of Rayleigh quotients over the test family and never certify.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{b3_bound, b3_window_threshold, delta_tilde_window, kappa_d, Window};
use crate::error::{Error, Result};
use crate::fields::{Quadrature, TestField};
use crate::hgroup::{ClosedForm, Jet};
use crate::numerics::golden_section;

/// Potential grammar. Every form is a function of `|z|` and `t` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum PotentialSpec {
    /// `c |z|^α`
    Power {
        coefficient: f64,
        #[serde(default)]
        imag: f64,
        exponent: f64,
    },
    /// `c |(z,t)|_H^α`
    KoranyiPower {
        coefficient: f64,
        #[serde(default)]
        imag: f64,
        exponent: f64,
    },
    /// `c e^{−a|z|²}`
    Gaussian {
        coefficient: f64,
        #[serde(default)]
        imag: f64,
        #[serde(default = "one")]
        rate: f64,
    },
    Sum { terms: Vec<PotentialSpec> },
}

fn one() -> f64 {
    1.0
}

impl PotentialSpec {
    pub fn zero() -> Self {
        PotentialSpec::Sum { terms: vec![] }
    }

    pub fn power(c: f64, alpha: f64) -> Self {
        PotentialSpec::Power {
            coefficient: c,
            imag: 0.0,
            exponent: alpha,
        }
    }

    pub fn koranyi_power(c: f64, alpha: f64) -> Self {
        PotentialSpec::KoranyiPower {
            coefficient: c,
            imag: 0.0,
            exponent: alpha,
        }
    }

    pub fn gaussian(c: f64, rate: f64) -> Self {
        PotentialSpec::Gaussian {
            coefficient: c,
            imag: 0.0,
            rate,
        }
    }

    /// Flattened list of elementary terms.
    pub fn terms(&self) -> Vec<&PotentialSpec> {
        match self {
            PotentialSpec::Sum { terms } => terms.iter().flat_map(|t| t.terms()).collect(),
            t => vec![t],
        }
    }

    fn coefficient(&self) -> Complex64 {
        match *self {
            PotentialSpec::Power { coefficient, imag, .. }
            | PotentialSpec::KoranyiPower { coefficient, imag, .. }
            | PotentialSpec::Gaussian { coefficient, imag, .. } => Complex64::new(coefficient, imag),
            PotentialSpec::Sum { .. } => unreachable!("sums are flattened"),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms().iter().all(|t| t.coefficient().im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms().iter().all(|t| t.coefficient() == Complex64::new(0.0, 0.0))
    }

    /// Real part of the potential as a spec.
    pub fn real_part(&self) -> PotentialSpec {
        self.map_coefficients(|c| Complex64::new(c.re, 0.0))
    }

    /// Imaginary part `Im V` as a real spec.
    pub fn imag_part(&self) -> PotentialSpec {
        self.map_coefficients(|c| Complex64::new(c.im, 0.0))
    }

    fn map_coefficients(&self, f: impl Fn(Complex64) -> Complex64 + Copy) -> PotentialSpec {
        match self {
            PotentialSpec::Sum { terms } => PotentialSpec::Sum {
                terms: terms.iter().map(|t| t.map_coefficients(f)).collect(),
            },
            t => {
                let c = f(t.coefficient());
                let mut out = t.clone();
                match &mut out {
                    PotentialSpec::Power { coefficient, imag, .. }
                    | PotentialSpec::KoranyiPower { coefficient, imag, .. }
                    | PotentialSpec::Gaussian { coefficient, imag, .. } => {
                        *coefficient = c.re;
                        *imag = c.im;
                    }
                    PotentialSpec::Sum { .. } => unreachable!(),
                }
                out
            }
        }
    }

    /// `V` at a point with `|z| = r` and height `t`.
    pub fn value_rt(&self, r: f64, t: f64) -> Complex64 {
        self.terms().iter().map(|term| term.coefficient() * term.shape(r, t).0).sum()
    }

    /// `∂_r(|z| V)` at `(r, t)`. The horizontal radial derivative `(z/|z|)·∇_H`
    /// annihilates the `t`-terms of `X_j, Y_j`, so it is the Euclidean
    /// `∂/∂|z|` at fixed `t`.
    pub fn radial_rv_rt(&self, r: f64, t: f64) -> Complex64 {
        self.terms()
            .iter()
            .map(|term| {
                let (s, ds) = term.shape(r, t);
                term.coefficient() * (s + r * ds)
            })
            .sum()
    }

    /// `V` at a point of ℍᵈ.
    pub fn value(&self, d: usize, p: &[f64]) -> Complex64 {
        let (r, t) = rt(d, p);
        self.value_rt(r, t)
    }

    pub fn radial_rv(&self, d: usize, p: &[f64]) -> Complex64 {
        let (r, t) = rt(d, p);
        self.radial_rv_rt(r, t)
    }

    /// Unit-coefficient profile and its `r`-derivative.
    fn shape(&self, r: f64, t: f64) -> (f64, f64) {
        match *self {
            PotentialSpec::Power { exponent: a, .. } => {
                if a == 0.0 {
                    (1.0, 0.0)
                } else {
                    let v = r.powf(a);
                    (v, a * v / r)
                }
            }
            PotentialSpec::KoranyiPower { exponent: a, .. } => {
                let n4 = r.powi(4) + t * t;
                let n = n4.powf(0.25);
                let v = n.powf(a);
                // ∂_r N = r³/N³
                (v, a * v / n * r.powi(3) / (n * n * n))
            }
            PotentialSpec::Gaussian { rate, .. } => {
                let v = (-rate * r * r).exp();
                (v, -2.0 * rate * r * v)
            }
            PotentialSpec::Sum { .. } => unreachable!(),
        }
    }
}

fn rt(d: usize, p: &[f64]) -> (f64, f64) {
    (p[..2 * d].iter().map(|x| x * x).sum::<f64>().sqrt(), p[2 * d])
}

/// The weights whose Hardy-type bounds enter the theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightForm {
    /// `|z|²|V|²` (constant `b`)
    ZSquaredModulus,
    /// `V₋ = max(0, −Re V)` (constant `b₁`)
    NegativePart,
    /// `(∂_r(|z| Re V))₊` (constant `b₂`, and `b` of the positive-potential theorem)
    RadialPositivePart,
    /// `|z|²|Im V|²` (constant `b₃`)
    ZSquaredImag,
}

impl WeightForm {
    /// `w(z, t)` such that the bound reads `∫ w|ψ|² ≤ b² ∫|∇_H ψ|²`.
    pub fn eval(&self, v: &PotentialSpec, r: f64, t: f64) -> f64 {
        match self {
            WeightForm::ZSquaredModulus => r * r * v.value_rt(r, t).norm_sqr(),
            WeightForm::NegativePart => (-v.value_rt(r, t).re).max(0.0),
            WeightForm::RadialPositivePart => v.radial_rv_rt(r, t).re.max(0.0),
            WeightForm::ZSquaredImag => {
                let i = v.value_rt(r, t).im;
                r * r * i * i
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Analytic,
    QuotientSup,
}

/// A bound `b` with `∫ w|ψ|² ≤ b² ∫|∇_H ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    /// Certified upper bound; `None` when no pointwise majorization was found.
    pub upper: Option<f64>,
    /// Largest `(∫ w|ψ|² / ∫|∇_H ψ|²)^{1/2}` seen on the family (0 when not sampled).
    pub lower: f64,
    pub method: BoundMethod,
}

impl Bound {
    pub fn certified(&self) -> bool {
        self.upper.is_some()
    }

    /// The value a decision should use: the certified bound, else the empirical one.
    pub fn decision_value(&self) -> f64 {
        self.upper.unwrap_or(self.lower)
    }
}

/// The four bounds of the perturbed theorems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialBounds {
    pub d: usize,
    pub b: Bound,
    pub b1: Bound,
    pub b2: Bound,
    pub b3: Bound,
    /// `W^{1,d}_loc` regularity is assumed, not checked.
    pub regularity_assumed: bool,
}

/// `sup_{r,t} |z|² w` for a single term, or `None` when unbounded.
fn term_sup(form: WeightForm, term: &PotentialSpec) -> Option<f64> {
    let c = term.coefficient();
    let golden_max = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| -> f64 {
        let m = golden_section(|x| -f(x), a, b, 1e-12);
        // tiny relative pad: golden section locates the maximum, not an enclosure
        (-m.value).max(f(a)).max(f(b)) * (1.0 + 1e-9)
    };
    match form {
        WeightForm::ZSquaredModulus | WeightForm::ZSquaredImag => {
            let m = if form == WeightForm::ZSquaredModulus { c.norm() } else { c.im.abs() };
            if m == 0.0 {
                return Some(0.0);
            }
            // |z|²·|z|²|V|² = (|z|²|V|)²
            let s = match *term {
                PotentialSpec::Power { exponent, .. } => (exponent == -2.0).then_some(m),
                // |z|² N^α ≤ |z|^{2+α} for α < 0
                PotentialSpec::KoranyiPower { exponent, .. } => (exponent == -2.0).then_some(m),
                // max_r r² e^{−a r²} = 1/(a e)
                PotentialSpec::Gaussian { rate, .. } => (rate > 0.0).then(|| m / (rate * std::f64::consts::E)),
                PotentialSpec::Sum { .. } => unreachable!(),
            }?;
            Some(s)
        }
        WeightForm::NegativePart => {
            if c.re >= 0.0 {
                return Some(0.0);
            }
            let m = -c.re;
            match *term {
                PotentialSpec::Power { exponent, .. } | PotentialSpec::KoranyiPower { exponent, .. } => {
                    (exponent == -2.0).then_some(m)
                }
                PotentialSpec::Gaussian { rate, .. } => (rate > 0.0).then(|| m / (rate * std::f64::consts::E)),
                PotentialSpec::Sum { .. } => unreachable!(),
            }
        }
        WeightForm::RadialPositivePart => {
            let cr = c.re;
            if cr == 0.0 {
                return Some(0.0);
            }
            match *term {
                // ∂_r(c r^{α+1}) = c(α+1) r^α
                PotentialSpec::Power { exponent, .. } => {
                    if cr * (exponent + 1.0) <= 0.0 {
                        Some(0.0)
                    } else if exponent == -2.0 {
                        Some(cr.abs())
                    } else {
                        None
                    }
                }
                // r²·c N^{−2}(1 − 2w²) with w = r²/N² ∈ [0, 1]
                PotentialSpec::KoranyiPower { exponent, .. } => {
                    if exponent != -2.0 {
                        return None;
                    }
                    let f = |w: f64| cr * w * (1.0 - 2.0 * w * w);
                    Some(golden_max(&f, 0.0, 1.0).max(0.0))
                }
                // r²·c e^{−s}(1 − 2s)/a with s = a r²
                PotentialSpec::Gaussian { rate, .. } => {
                    if rate <= 0.0 {
                        return None;
                    }
                    let f = |s: f64| cr / rate * s * (1.0 - 2.0 * s) * (-s).exp();
                    // the profile changes sign once at s = 1/2 and decays beyond s ≈ 40
                    let best = if cr > 0.0 { golden_max(&f, 0.0, 0.5) } else { golden_max(&f, 0.5, 40.0) };
                    Some(best.max(0.0))
                }
                PotentialSpec::Sum { .. } => unreachable!(),
            }
        }
    }
}

/// Analytic upper bound: `w ≤ C/|z|²` term by term, then Hardy. For the
/// squared-modulus forms `term_sup` returns `sup |z|²|V_k|`, so
/// `|z|²|V|² ≤ (Σ_k s_k)²/|z|²`; otherwise `C = Σ_k sup |z|² w_k`.
pub fn analytic_bound(d: usize, v: &PotentialSpec, form: WeightForm) -> Result<Option<f64>> {
    if d < 2 {
        return Err(Error::Domain("the horizontal Hardy inequality needs d >= 2".into()));
    }
    let dm1 = (d - 1) as f64;
    let mut s = 0.0;
    for t in v.terms() {
        match term_sup(form, t) {
            Some(c) => s += c,
            None => return Ok(None),
        }
    }
    Ok(Some(match form {
        WeightForm::ZSquaredModulus | WeightForm::ZSquaredImag => s / dm1,
        _ => s.sqrt() / dm1,
    }))
}

/// Empirical `max_ψ (∫ w|ψ|² / ∫|∇_H ψ|²)^{1/2}` over the family.
pub fn quotient_sup(v: &PotentialSpec, form: WeightForm, family: &[TestField], q: &Quadrature) -> f64 {
    let mut best: f64 = 0.0;
    for f in family {
        let d = f.dim();
        let mut jet = Jet::new(d);
        let mut g = vec![Complex64::new(0.0, 0.0); 2 * d];
        let s = q.integrate(d, &f.decay, 2, |p, r, out| {
            f.jet_into(p, 1, &mut jet);
            jet.horizontal_into(p, &mut g);
            out[0] = form.eval(v, r, p[2 * d]) * jet.value.norm_sqr();
            out[1] = g.iter().map(|c| c.norm_sqr()).sum();
        });
        if s[1] > 0.0 {
            best = best.max((s[0] / s[1]).max(0.0).sqrt());
        }
    }
    best
}

/// Certified upper bound (analytic mode) paired with the family supremum.
/// Unrecognized forms fall back to quotient-sup with `upper = None`.
pub fn bound_weighted(
    d: usize,
    v: &PotentialSpec,
    form: WeightForm,
    family: Option<(&[TestField], &Quadrature)>,
) -> Result<Bound> {
    let upper = analytic_bound(d, v, form)?;
    let lower = match family {
        Some((fam, q)) => quotient_sup(v, form, fam, q),
        None => 0.0,
    };
    Ok(Bound {
        upper,
        lower,
        method: if upper.is_some() { BoundMethod::Analytic } else { BoundMethod::QuotientSup },
    })
}

/// All four bounds in analytic mode (optionally with family suprema).
pub fn potential_bounds(
    d: usize,
    v: &PotentialSpec,
    family: Option<(&[TestField], &Quadrature)>,
) -> Result<PotentialBounds> {
    let re = v.real_part();
    Ok(PotentialBounds {
        d,
        b: bound_weighted(d, v, WeightForm::ZSquaredModulus, family)?,
        b1: bound_weighted(d, &re, WeightForm::NegativePart, family)?,
        b2: bound_weighted(d, &re, WeightForm::RadialPositivePart, family)?,
        b3: bound_weighted(d, v, WeightForm::ZSquaredImag, family)?,
        regularity_assumed: true,
    })
}

/// Decision on the eigenvalue-absence hypothesis `b < 1/((d−1)κ_d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThmV1Report {
    pub d: usize,
    pub b: f64,
    pub threshold: f64,
    pub margin: f64,
    pub hypothesis_met: bool,
    /// `false` when only an empirical `b` was available.
    pub certifying: bool,
    /// `∫|V||ψ|² ≤ (b/(d−1)) ∫|∇_H ψ|²`.
    pub subordination_constant: f64,
}

pub fn thm_v1_threshold(d: usize) -> Result<f64> {
    let k = kappa_d(d)?.kappa();
    Ok(1.0 / ((d - 1) as f64 * k))
}

pub fn check_thm_v1(d: usize, b: &Bound) -> Result<ThmV1Report> {
    let threshold = thm_v1_threshold(d)?;
    let bv = b.decision_value();
    Ok(ThmV1Report {
        d,
        b: bv,
        threshold,
        margin: threshold - bv,
        hypothesis_met: bv < threshold,
        certifying: b.certified(),
        subordination_constant: bv / (d - 1) as f64,
    })
}

/// Decision on the complex-potential hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThmV2Report {
    pub d: usize,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    /// `b₃` threshold as stated.
    pub b3_bound: f64,
    /// Largest `b₃` with a nonempty `δ̃` window.
    pub b3_window_threshold: f64,
    pub stated_condition: bool,
    /// `None` when `b₃ = 0` (every opening admissible).
    pub window: Option<Window<f64>>,
    pub window_nonempty: bool,
    pub hypothesis_met: bool,
    /// `b₁² + b₂² + b₃/(d−1) < 1`.
    pub well_defined: bool,
    /// The free-case threshold `1/((d−1)κ_d)`, reported for comparison.
    pub thm_v1_threshold: f64,
    pub certifying: bool,
}

pub fn check_thm_v2(d: usize, b1: &Bound, b2: &Bound, b3: &Bound) -> Result<ThmV2Report> {
    let (v1, v2, v3) = (b1.decision_value(), b2.decision_value(), b3.decision_value());
    let units = v1 < 1.0 && v2 < 1.0;
    let (bound, thr) = if units {
        (b3_bound(d, v1, v2)?, b3_window_threshold(d, v1, v2)?)
    } else {
        (f64::NAN, f64::NAN)
    };
    let window = if units && v3 > 0.0 { Some(delta_tilde_window(d, v1, v2, v3)?) } else { None };
    let window_nonempty = units && window.map_or(true, |w| !w.is_empty());
    let stated = units && v3 < bound;
    Ok(ThmV2Report {
        d,
        b1: v1,
        b2: v2,
        b3: v3,
        b3_bound: bound,
        b3_window_threshold: thr,
        stated_condition: stated,
        window,
        window_nonempty,
        hypothesis_met: stated && window_nonempty,
        well_defined: v1 * v1 + v2 * v2 + v3 / ((d - 1) as f64) < 1.0,
        thm_v1_threshold: thm_v1_threshold(d)?,
        certifying: b1.certified() && b2.certified() && b3.certified(),
    })
}

/// Samples of `∂_r(|z| V)` along rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySample {
    pub t: f64,
    pub r: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepulsivityProfile {
    pub samples: Vec<RaySample>,
    pub positive_count: usize,
    pub negative_count: usize,
    pub max_positive_part: f64,
    /// `∂_r(|z| V) ≤ 0` on every sample.
    pub repulsive: bool,
    /// Radii where the sign flips along the `t = 0` ray.
    pub sign_changes: Vec<f64>,
}

/// `∂_r(|z| Re V)` on `radii × t_levels` (rays depend on `z` only, so the
/// direction in ℂᵈ is immaterial for these potentials). Points with
/// `r < eps_axis` are skipped.
pub fn radial_repulsivity_profile(v: &PotentialSpec, radii: &[f64], t_levels: &[f64], eps_axis: f64) -> RepulsivityProfile {
    let mut samples = Vec::new();
    for &t in t_levels {
        for &r in radii {
            if r < eps_axis {
                continue;
            }
            samples.push(RaySample {
                t,
                r,
                value: v.radial_rv_rt(r, t).re,
            });
        }
    }
    let tol = 1e-14;
    let positive_count = samples.iter().filter(|s| s.value > tol).count();
    let negative_count = samples.iter().filter(|s| s.value < -tol).count();
    let max_positive_part = samples.iter().map(|s| s.value.max(0.0)).fold(0.0, f64::max);
    let t0 = t_levels.first().copied().unwrap_or(0.0);
    let ray: Vec<&RaySample> = samples.iter().filter(|s| s.t == t0).collect();
    let sign_changes = ray
        .windows(2)
        .filter(|w| w[0].value.abs() > tol && w[1].value.abs() > tol && (w[0].value > 0.0) != (w[1].value > 0.0))
        .map(|w| 0.5 * (w[0].r + w[1].r))
        .collect();
    RepulsivityProfile {
        repulsive: positive_count == 0,
        samples,
        positive_count,
        negative_count,
        max_positive_part,
        sign_changes,
    }
}

/// Per-sample check of `∫|Im V||ψ|² ≤ (b₃/(d−1)) ∫|∇_H ψ|²` whenever
/// `∫|z|²|Im V|²|ψ|² ≤ b₃² ∫|∇_H ψ|²` holds for that `ψ`. Returns
/// `(premise_holds, conclusion_holds)` per member.
pub fn imaginary_part_chain(v: &PotentialSpec, b3: f64, family: &[TestField], q: &Quadrature) -> Vec<(bool, bool)> {
    family
        .iter()
        .map(|f| {
            let d = f.dim();
            let mut jet = Jet::new(d);
            let mut g = vec![Complex64::new(0.0, 0.0); 2 * d];
            let s = q.integrate(d, &f.decay, 3, |p, r, out| {
                f.jet_into(p, 1, &mut jet);
                jet.horizontal_into(p, &mut g);
                let im = v.value_rt(r, p[2 * d]).im;
                let m = jet.value.norm_sqr();
                out[0] = im.abs() * m;
                out[1] = r * r * im * im * m;
                out[2] = g.iter().map(|c| c.norm_sqr()).sum();
            });
            let premise = s[1] <= b3 * b3 * s[2] * (1.0 + 1e-9);
            let conclusion = s[0] <= b3 / (d - 1) as f64 * s[2] * (1.0 + 1e-6);
            (premise, conclusion)
        })
        .collect()
}
