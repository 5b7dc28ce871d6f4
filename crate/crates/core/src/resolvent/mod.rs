//! Uniform resolvent estimates for `−𝓛u − Vu + λu = f` in manufactured mode:
//! pick `u` with exact `𝓛u`, derive `f`, and check every estimate and
//! multiplier identity by quadrature.

mod batch;
mod discrete;
mod identities;
mod moments;

pub use batch::{
    default_deltas, default_lambda_grid, run_batch, run_suite, BatchEntry, BatchReport, BatchSpec, FieldRef,
    PotentialCase, SuiteConfig, SuiteReport, Theorem,
};
pub use discrete::{discrete_thm1, grid_moments, DISCRETE_DISCLAIMER, DISCRETE_TOL, discrete_solve, DiscreteGrid, DiscreteOperator, DiscreteSolution, DiscreteVerdicts};
pub use identities::{
    am_final_displayed, am_final_moments, check_identity_am_final, check_multiplier_identities, est1_chain, gradumeno_pointwise_residual,
    koranyi_probe, multiplier_identities, parabola_check, ChainCheck, IdentityResidual, KoranyiProbe, Multiplier1,
    Multiplier2, ParabolaCheck, IDENTITY_TOL,
};
pub use moments::{bilaplacian_phi3, compute_moments, phi3, MomentSet, Moments};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{k_db, kappa_d, kappa_db, m_db2, mu, K_d};
use crate::error::{Error, Result};
use crate::fields::{ConeConvention, ConeSide, Quadrature, SpectralParam, TestField};
use crate::hgroup::{sublaplacian, ClosedForm, HPoint, Jet};
use crate::potentials::PotentialSpec;

/// A manufactured solution `u` with its spectral parameter and potential.
#[derive(Debug, Clone)]
pub struct ResolventInstance {
    pub u: TestField,
    pub s: SpectralParam,
    pub v: Option<PotentialSpec>,
}

pub fn make_instance(u: TestField, s: SpectralParam, v: Option<PotentialSpec>) -> Result<ResolventInstance> {
    if !u.exact_sublaplacian {
        return Err(Error::Capability(format!("field '{}' has no exact sublaplacian", u.id)));
    }
    if let Some(v) = &v {
        if !v.is_real() {
            return Err(Error::Domain("the resolvent equation takes a real potential".into()));
        }
    }
    Ok(ResolventInstance { u, s, v })
}

impl ResolventInstance {
    pub fn d(&self) -> usize {
        self.u.dim()
    }

    pub fn lambda(&self) -> Complex64 {
        self.s.as_complex()
    }

    fn potential_at(&self, p: &[f64]) -> f64 {
        self.v.as_ref().map_or(0.0, |v| v.value(self.d(), p).re)
    }

    /// `f = −𝓛u − Vu + λu` from the jet of `u`.
    pub fn f_at(&self, p: &[f64]) -> Complex64 {
        let mut jet = Jet::new(self.d());
        self.u.jet_into(p, 2, &mut jet);
        -jet.sublaplacian(p) - jet.value * self.potential_at(p) + self.lambda() * jet.value
    }

    /// Largest relative gap between [`Self::f_at`] and `f` rebuilt through the
    /// point-level operator API.
    pub fn consistency_residual(&self, points: &[Vec<f64>]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for c in points {
            let p = HPoint::from_coords(self.d(), c)?;
            let lu = sublaplacian(&self.u, &p)?;
            let u = self.u.value(c);
            let f = -lu - u * self.potential_at(c) + self.lambda() * u;
            let scale = f.norm().max(lu.norm()).max(1e-300);
            worst = worst.max((f - self.f_at(c)).norm() / scale);
        }
        Ok(worst)
    }

    pub fn moments(&self, q: &Quadrature) -> Moments {
        compute_moments(&self.u, self.v.as_ref(), q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "est1")]
    Est1,
    #[serde(rename = "est2")]
    Est2,
    #[serde(rename = "katoyajima")]
    Katoyajima,
    #[serde(rename = "GL-weak")]
    GlWeak,
    #[serde(rename = "est3b")]
    Est3b,
    #[serde(rename = "est4b")]
    Est4b,
    #[serde(rename = "est3")]
    Est3,
    #[serde(rename = "est4")]
    Est4,
    #[serde(rename = "katoyajima2")]
    Katoyajima2,
}

/// One inequality `lhs ≤ rhs` evaluated on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub id: InequalityId,
    pub member: String,
    pub lambda: SpectralParam,
    pub delta: f64,
    pub cone: ConeSide,
    pub convention: ConeConvention,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub margin: f64,
    pub quad_error: f64,
    pub pass: bool,
}

impl InequalityVerdict {
    fn new(
        id: InequalityId,
        m: &Moments,
        s: SpectralParam,
        delta: f64,
        cone: (ConeSide, ConeConvention),
        constant: f64,
        lhs: (f64, f64),
        norm: (f64, f64),
    ) -> Self {
        let rhs = constant * norm.0;
        let quad_error = lhs.1 + constant * norm.1;
        InequalityVerdict {
            id,
            member: m.member.clone(),
            lambda: s,
            delta,
            cone: cone.0,
            convention: cone.1,
            lhs: lhs.0,
            rhs,
            constant,
            margin: rhs - lhs.0,
            quad_error,
            pass: lhs.0 <= rhs + 3.0 * quad_error,
        }
    }
}

/// `‖|z| f‖` with `f = −L + λu`.
pub fn zf_norm(ms: &MomentSet, lambda: Complex64) -> f64 {
    (ms.a - 2.0 * (lambda * ms.b).re + lambda.norm_sqr() * ms.c).max(0.0).sqrt()
}

/// `‖N f‖` with the Koranyi gauge `N`.
pub fn nf_norm(ms: &MomentSet, lambda: Complex64) -> f64 {
    (ms.a_n - 2.0 * (lambda * ms.b_n).re + lambda.norm_sqr() * ms.c_n).max(0.0).sqrt()
}

/// `‖∇_H u^−‖` for `u^− = e^{−iθ|z|}u`.
pub fn grad_uminus_norm(ms: &MomentSet, theta: f64) -> f64 {
    (ms.g + theta * theta * ms.u - 2.0 * theta * ms.s).max(0.0).sqrt()
}

/// Constants shared by all instances at one `(d, δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeConstants {
    pub d: usize,
    pub delta: f64,
    pub k_d: f64,
    pub kappa_d: f64,
}

impl FreeConstants {
    pub fn new(d: usize, delta: f64) -> Result<Self> {
        Ok(Self {
            d,
            delta,
            k_d: K_d(d, delta)?,
            kappa_d: kappa_d(d)?.kappa(),
        })
    }
}

/// Constants of the potential theorems at one `(d, δ, b, b₁, b₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbedThmConstants {
    pub d: usize,
    pub delta: f64,
    pub b: Option<f64>,
    pub k_db: Option<f64>,
    pub kappa_db: Option<f64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub m_db2: Option<f64>,
    pub mu: Option<f64>,
}

impl PerturbedThmConstants {
    /// `b` drives the positive-potential theorem, `(b₁, b₂)` the general one;
    /// either may be absent.
    pub fn new(d: usize, delta: f64, b: Option<f64>, b12: Option<(f64, f64)>) -> Result<Self> {
        let (k, kap) = match b {
            Some(b) => (Some(k_db(d, delta, b)?), Some(kappa_db(d, b)?.value)),
            None => (None, None),
        };
        let (m, mu_v) = match b12 {
            Some((b1, b2)) => (Some(m_db2(d, delta, b2)?.value), Some(mu(d, b1, b2)?.value)),
            None => (None, None),
        };
        Ok(Self {
            d,
            delta,
            b,
            k_db: k,
            kappa_db: kap,
            b1: b12.map(|x| x.0),
            b2: b12.map(|x| x.1),
            m_db2: m,
            mu: mu_v,
        })
    }
}

/// Free-case verdicts from precomputed moments.
pub fn thm1_verdicts(m: &Moments, s: SpectralParam, c: &FreeConstants) -> Vec<InequalityVerdict> {
    let lam = s.as_complex();
    let d = m.d;
    let dm1 = (d - 1) as f64;
    let delta = c.delta;
    let conv = ConeConvention::AbsLambda1;
    let side = s.classify(delta, conv);
    let zf = m.eval(|ms| zf_norm(ms, lam));
    let mut out = Vec::new();
    let est1_applies = side != ConeSide::Inside || s.l1 < 0.0;
    if est1_applies {
        out.push(InequalityVerdict::new(
            InequalityId::Est1,
            m,
            s,
            delta,
            (side, conv),
            (1.0 + 1.0 / delta) / dm1,
            m.eval(|ms| ms.g.max(0.0).sqrt()),
            zf,
        ));
    }
    if side != ConeSide::Outside && s.l1 >= 0.0 {
        let theta = s.theta();
        out.push(InequalityVerdict::new(
            InequalityId::Est2,
            m,
            s,
            delta,
            (side, conv),
            c.k_d,
            m.eval(|ms| grad_uminus_norm(ms, theta)),
            zf,
        ));
    }
    out.push(InequalityVerdict::new(
        InequalityId::Katoyajima,
        m,
        s,
        delta,
        (side, conv),
        c.kappa_d,
        m.eval(|ms| ms.u_r2.max(0.0).sqrt()),
        zf,
    ));
    out.push(InequalityVerdict::new(
        InequalityId::GlWeak,
        m,
        s,
        delta,
        (side, conv),
        c.kappa_d,
        m.eval(|ms| ms.u_n2.max(0.0).sqrt()),
        m.eval(|ms| nf_norm(ms, lam)),
    ));
    out
}

/// Verdicts of the positive-potential theorem (`c.b`) and/or the general
/// real-potential theorem (`c.b1, c.b2`). The cone uses `λ₁` without absolute
/// value; `λ₁ < 0` is outside.
pub fn perturbed_verdicts(m: &Moments, s: SpectralParam, c: &PerturbedThmConstants) -> Vec<InequalityVerdict> {
    let lam = s.as_complex();
    let dm1 = (m.d - 1) as f64;
    let delta = c.delta;
    let conv = ConeConvention::SignedLambda1;
    let side = s.classify(delta, conv);
    let zf = m.eval(|ms| zf_norm(ms, lam));
    let grad = m.eval(|ms| ms.g.max(0.0).sqrt());
    let theta = s.theta();
    let grad_minus = m.eval(|ms| grad_uminus_norm(ms, theta));
    let u_over_z = m.eval(|ms| ms.u_r2.max(0.0).sqrt());
    let mut out = Vec::new();
    let outside = side != ConeSide::Inside;
    let inside = side != ConeSide::Outside && s.l1 >= 0.0;
    let mut push = |id, constant, lhs| out.push(InequalityVerdict::new(id, m, s, delta, (side, conv), constant, lhs, zf));
    if let (Some(_), Some(k), Some(kap)) = (c.b, c.k_db, c.kappa_db) {
        if outside {
            push(InequalityId::Est3b, (1.0 + 1.0 / delta) / dm1, grad);
        }
        if inside {
            push(InequalityId::Est4b, k, grad_minus);
        }
        push(InequalityId::Katoyajima2, kap, u_over_z);
    }
    if let (Some(b1), Some(mm), Some(mu_v)) = (c.b1, c.m_db2, c.mu) {
        if outside {
            push(InequalityId::Est3, (1.0 + 1.0 / delta) / (dm1 * (1.0 - b1 * b1)), grad);
        }
        if inside {
            push(InequalityId::Est4, mm, grad_minus);
        }
        push(InequalityId::Katoyajima2, mu_v, u_over_z);
    }
    out
}

/// Free estimates for one instance at opening `δ`.
pub fn verify_thm1(inst: &ResolventInstance, delta: f64, q: &Quadrature) -> Result<Vec<InequalityVerdict>> {
    if inst.v.as_ref().is_some_and(|v| !v.is_zero()) {
        return Err(Error::Domain("the free estimates take no potential".into()));
    }
    let c = FreeConstants::new(inst.d(), delta)?;
    Ok(thm1_verdicts(&inst.moments(q), inst.s, &c))
}

/// Positive-potential estimates with certified `b` (from the potentials module).
pub fn verify_thm_pp(inst: &ResolventInstance, delta: f64, b: f64, q: &Quadrature) -> Result<Vec<InequalityVerdict>> {
    let v = inst
        .v
        .as_ref()
        .ok_or_else(|| Error::Domain("the positive-potential estimates need a potential".into()))?;
    check_nonnegative(v, inst.d())?;
    let c = PerturbedThmConstants::new(inst.d(), delta, Some(b), None)?;
    Ok(perturbed_verdicts(&inst.moments(q), inst.s, &c))
}

/// Real-potential estimates with certified `(b₁, b₂)`.
pub fn verify_thm16(
    inst: &ResolventInstance,
    delta: f64,
    b1: f64,
    b2: f64,
    q: &Quadrature,
) -> Result<Vec<InequalityVerdict>> {
    if inst.v.is_none() {
        return Err(Error::Domain("the real-potential estimates need a potential".into()));
    }
    let c = PerturbedThmConstants::new(inst.d(), delta, None, Some((b1, b2)))?;
    Ok(perturbed_verdicts(&inst.moments(q), inst.s, &c))
}

/// `V ≥ 0` on a deterministic cloud of `(|z|, t)` samples.
pub fn check_nonnegative(v: &PotentialSpec, d: usize) -> Result<()> {
    for i in 1..=60 {
        for j in 0..21 {
            let r = 0.05 * i as f64;
            let t = -5.0 + 0.5 * j as f64;
            let val = v.value_rt(r, t).re;
            if val < 0.0 {
                return Err(Error::HypothesisViolation(format!(
                    "V = {val:e} < 0 at |z| = {r}, t = {t} (d = {d})"
                )));
            }
        }
    }
    Ok(())
}
