//! Multiplier identities, the gauge-transformed key identity, and the
//! arithmetic steps of the free-case proof, all evaluated from moments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::moments::{MomentSet, Moments};
use super::{grad_uminus_norm, nf_norm, zf_norm, ResolventInstance};
use crate::constants::k_db_argmin;
use crate::error::{Error, Result};
use crate::fields::{gauge_transform, GaugeSign, Quadrature, SpectralParam};
use crate::hgroup::{ClosedForm, Jet};

/// Relative residual accepted for identities evaluated by quadrature.
pub const IDENTITY_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub id: String,
    pub member: String,
    pub lambda: SpectralParam,
    pub lhs: f64,
    pub rhs: f64,
    /// `max(|lhs|, |rhs|, largest single term)`; the last entry only matters
    /// when both sides vanish (e.g. `λ₂ = 0` in the imaginary-part identity).
    pub scale: f64,
    pub residual: f64,
    /// The same residual at the coarse quadrature level.
    pub residual_coarse: f64,
    pub tol: f64,
    pub holds: bool,
}

/// One side-by-side evaluation: `(lhs, rhs, term scale)` per level.
fn residual(
    id: &str,
    m: &Moments,
    s: SpectralParam,
    f: impl Fn(&MomentSet) -> (f64, f64, f64),
) -> IdentityResidual {
    let rel = |(l, r, t): (f64, f64, f64)| {
        let scale = l.abs().max(r.abs()).max(t).max(f64::MIN_POSITIVE);
        ((l - r).abs() / scale, scale)
    };
    let fine = f(&m.fine);
    let (res, scale) = rel(fine);
    let (res_c, _) = rel(f(&m.coarse));
    IdentityResidual {
        id: id.to_string(),
        member: m.member.clone(),
        lambda: s,
        lhs: fine.0,
        rhs: fine.1,
        scale,
        residual: res,
        residual_coarse: res_c,
        tol: IDENTITY_TOL,
        holds: res <= IDENTITY_TOL,
    }
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// `∫ f ū`, `∫|z| f ū`, `∫ f z·∇ū` for `f = −L + λu`.
fn pairings(ms: &MomentSet, lam: Complex64) -> (Complex64, Complex64, Complex64) {
    (-ms.l1 + lam * ms.u, -ms.lr + lam * ms.u_r, -ms.lg + lam * ms.ug)
}

/// `β = |λ₂|/√λ₁`, with `β = 0` when `λ₂ = 0`.
fn beta(s: &SpectralParam) -> Result<f64> {
    if s.l2 == 0.0 {
        return Ok(0.0);
    }
    if s.l1 <= 0.0 {
        return Err(Error::Domain(format!(
            "the key identity divides by sqrt(lambda1); lambda = {s} belongs to the outside-cone branch"
        )));
    }
    Ok(s.l2.abs() / s.l1.sqrt())
}

/// Whitelisted first multipliers (real-part identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Multiplier1 {
    /// `Φ₁ = 1` (also `−𝓛Φ₃/(4d)` for `Φ₃ = |z|²`)
    One,
    /// `Φ₁ = −(|λ₂|/√λ₁)|z|`
    MinusBetaR,
}

/// Whitelisted second multipliers (imaginary-part identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Multiplier2 {
    One,
    /// `Φ₂ = sgn(λ₂) ∇_HΦ₃·z/|z| = 2 sgn(λ₂)|z|`
    SignedRadial,
}

/// All multiplier identities for one `λ` (free moments only). Entries whose
/// hypotheses fail for this `λ` are omitted. The id `fond3-displayed` carries
/// the opposite sign of the `λ₂` term and is expected to fail for `λ₂ ≠ 0`.
pub fn multiplier_identities(m: &Moments, s: SpectralParam) -> Result<Vec<IdentityResidual>> {
    if m.potential.as_ref().is_some_and(|v| !v.is_zero()) {
        return Err(Error::Capability(
            "multiplier identities are evaluated for the free equation; use the key identity for potentials".into(),
        ));
    }
    let mut out = Vec::new();
    for p1 in [Multiplier1::One, Multiplier1::MinusBetaR] {
        if let Some(r) = fond1(m, s, p1)? {
            out.push(r);
        }
    }
    for p2 in [Multiplier2::One, Multiplier2::SignedRadial] {
        out.push(fond2(m, s, p2));
    }
    out.push(fond3(m, s, false));
    out.push(fond3(m, s, true));
    if s.l1 >= 0.0 {
        out.push(comp1(m, s, false));
        out.push(comp1(m, s, true));
    }
    if s.l1 >= 0.0 && !(s.l1 == 0.0 && s.l2 != 0.0) {
        out.push(am_final_moments(m, s)?);
        out.push(am_final_displayed(m, s)?);
    }
    Ok(out)
}

/// `−½∫𝓛Φ₁|u|² − ∫Φ₁|∇_H u|² + λ₁∫Φ₁|u|² = Re∫fΦ₁ū`. `None` when the
/// multiplier vanishes identically (`Φ₁ = −β|z|` with `β = 0`).
fn fond1(m: &Moments, s: SpectralParam, phi: Multiplier1) -> Result<Option<IdentityResidual>> {
    let lam = s.as_complex();
    let d = m.d as f64;
    Ok(Some(match phi {
        Multiplier1::One => residual("fond1[phi1=1]", m, s, |ms| {
            let (f1, _, _) = pairings(ms, lam);
            (-ms.g + s.l1 * ms.u, f1.re, max_abs(&[ms.g, s.l1 * ms.u, f1.norm()]))
        }),
        Multiplier1::MinusBetaR => {
            if s.l1 <= 0.0 {
                return Ok(None);
            }
            let b = beta(&s)?;
            if b == 0.0 {
                return Ok(None);
            }
            // 𝓛|z| = −(2d−1)/|z|
            residual("fond1[phi1=-beta|z|]", m, s, |ms| {
                let (_, fr, _) = pairings(ms, lam);
                let t = [-0.5 * b * (2.0 * d - 1.0) * ms.u_r1, b * ms.g_r, -s.l1 * b * ms.u_r];
                (t.iter().sum(), -b * fr.re, max_abs(&[t[0], t[1], t[2], b * fr.norm()]))
            })
        }
    }))
}

/// `−Im∫∇_HΦ₂·ū∇_H u + λ₂∫Φ₂|u|² = Im∫fΦ₂ū`.
fn fond2(m: &Moments, s: SpectralParam, phi: Multiplier2) -> IdentityResidual {
    let lam = s.as_complex();
    match phi {
        Multiplier2::One => residual("fond2[phi2=1]", m, s, |ms| {
            let (f1, _, _) = pairings(ms, lam);
            (s.l2 * ms.u, f1.im, max_abs(&[s.l2 * ms.u, f1.norm()]))
        }),
        Multiplier2::SignedRadial => {
            let sg = s.sgn();
            residual("fond2[phi2=2sgn|z|]", m, s, |ms| {
                let (_, fr, _) = pairings(ms, lam);
                let t = [-2.0 * sg * ms.s, 2.0 * sg * s.l2 * ms.u_r];
                (t[0] + t[1], 2.0 * sg * fr.im, max_abs(&[t[0], t[1], 2.0 * fr.norm()]))
            })
        }
    }
}

/// Skew-symmetric multiplier identity with `Φ₃ = |z|²`, all `Φ₃`-terms taken
/// from exact partials, corrected for non-commuting fields:
/// `−¼∫𝓛²Φ₃|u|² + ∫∇ū·∇²_HΦ₃∇u + C₃ − λ₂ Im∫∇Φ₃·ū∇u = ½Re∫f𝓛Φ₃ū − Re∫f∇Φ₃·∇ū`
/// with the commutator term `C₃ = Re∫Σ_{a,b} ∂_aū ∂_bΦ₃ [∂_a, ∂_b]u`
/// ([`MomentSet::comm3`]). With `displayed_sign` the identity is evaluated in
/// its uncorrected form: no `C₃`, and `u∇ū` in place of `ū∇u`.
fn fond3(m: &Moments, s: SpectralParam, displayed_sign: bool) -> IdentityResidual {
    let lam = s.as_complex();
    let bilap = m.bilap_phi3;
    let id = if displayed_sign { "fond3-displayed" } else { "fond3" };
    let sign = if displayed_sign { 1.0 } else { -1.0 };
    let comm = if displayed_sign { 0.0 } else { 1.0 };
    residual(id, m, s, |ms| {
        let t1 = -0.25 * bilap * ms.u;
        let t2 = ms.hess3;
        let t3 = sign * s.l2 * ms.dphi3_su.im;
        let t4 = comm * ms.comm3;
        let fl = -ms.lphi3_l + lam * ms.lphi3_u;
        let fg = -ms.dphi3_lg + lam * ms.dphi3_ug;
        let r1 = 0.5 * fl.re;
        let r2 = -fg.re;
        (t1 + t2 + t3 + t4, r1 + r2, max_abs(&[t1, t2, t3, t4, 0.5 * fl.norm(), fg.norm()]))
    })
}

/// Combined identity (`λ₁ ≥ 0`), `θ = sgn(λ₂)√λ₁`:
/// `G + λ₁U − 2θ Im∫ω·ū∇u + 2√λ₁|λ₂|∫|z||u|² − 2λ₂ Im∫z·ū∇u
///  + C₃ = (1−2d)Re∫fū + 2θ Im∫|z|fū − 2Re∫f z·∇ū`,
/// `C₃` the commutator term of [`fond3`]; `displayed` drops it.
fn comp1(m: &Moments, s: SpectralParam, displayed: bool) -> IdentityResidual {
    let lam = s.as_complex();
    let d = m.d as f64;
    let th = s.theta();
    let comm = if displayed { 0.0 } else { 1.0 };
    residual(if displayed { "comp1-displayed" } else { "comp1" }, m, s, |ms| {
        let (f1, fr, fg) = pairings(ms, lam);
        let t = [
            ms.g,
            s.l1 * ms.u,
            -2.0 * th * ms.s,
            2.0 * s.l1.sqrt() * s.l2.abs() * ms.u_r,
            -2.0 * s.l2 * ms.s_r,
            comm * ms.comm3,
        ];
        let r = [(1.0 - 2.0 * d) * f1.re, 2.0 * th * fr.im, -2.0 * fg.re];
        (
            t.iter().sum(),
            r.iter().sum(),
            max_abs(&[t[0], t[1], t[2], t[3], t[4], t[5], (2.0 * d - 1.0) * f1.norm(), 2.0 * th * fr.norm(), 2.0 * fg.norm()]),
        )
    })
}

/// Key identity for `u^− = e^{−iθ|z|}u` from moments (potential terms
/// included when the moments carry one):
/// `∫(1+β|z|)|∇u^−|² − (d−½)β∫|u^−|²/|z| + β∫|z|V|u|² − ∫(V+|z|∂_rV)|u^−|²
///  = −Re∫|z|f e^{−iθ|z|}{[(2d−1)/|z| + β] conj(u^−) + 2(z/|z|)·∇ conj(u^−)}`.
/// The phase cancels: `e^{−iθ|z|}conj(u^−) = ū` and
/// `e^{−iθ|z|}∇conj(u^−) = ∇ū + iθ(z/|z|)ū`.
///
/// The left side also carries the commutator term `C₃` of [`fond3`]; the
/// `-displayed` variant ([`am_final_displayed`]) omits it.
pub fn am_final_moments(m: &Moments, s: SpectralParam) -> Result<IdentityResidual> {
    am_final_impl(m, s, false)
}

/// The key identity without the commutator term; fails whenever `C₃ ≠ 0`.
pub fn am_final_displayed(m: &Moments, s: SpectralParam) -> Result<IdentityResidual> {
    am_final_impl(m, s, true)
}

fn am_final_impl(m: &Moments, s: SpectralParam, displayed: bool) -> Result<IdentityResidual> {
    if s.l1 < 0.0 {
        return Err(Error::Domain("the key identity needs lambda1 >= 0".into()));
    }
    let b = beta(&s)?;
    let lam = s.as_complex();
    let d = m.d as f64;
    let th = s.theta();
    let id = match (m.potential.is_some(), displayed) {
        (true, false) => "am-finalV",
        (false, false) => "am-final",
        (true, true) => "am-finalV-displayed",
        (false, true) => "am-final-displayed",
    };
    let comm = if displayed { 0.0 } else { 1.0 };
    Ok(residual(id, m, s, |ms| {
        let (f1, fr, fg) = pairings(ms, lam);
        let gm = ms.g + s.l1 * ms.u - 2.0 * th * ms.s;
        let gmr = ms.g_r + s.l1 * ms.u_r - 2.0 * th * ms.s_r;
        let t = [gm, b * gmr, -(d - 0.5) * b * ms.u_r1, b * ms.rvu, -ms.drv_u, comm * ms.comm3];
        let rhs = -((2.0 * d - 1.0) * f1 + b * fr + 2.0 * fg + Complex64::new(0.0, 2.0 * th) * fr).re;
        (
            t.iter().sum(),
            rhs,
            max_abs(&[t[0], t[1], t[2], t[3], t[4], t[5], (2.0 * d - 1.0) * f1.norm(), b * fr.norm(), 2.0 * fg.norm(), 2.0 * th * fr.norm()]),
        )
    }))
}

/// The key identity evaluated directly on the gauge-transformed field (one
/// quadrature pass with the jets of `u` and `u^−`).
pub fn check_identity_am_final(inst: &ResolventInstance, q: &Quadrature) -> Result<IdentityResidual> {
    let s = inst.s;
    if s.l1 < 0.0 {
        return Err(Error::Domain("the key identity needs lambda1 >= 0".into()));
    }
    let b = beta(&s)?;
    let d = inst.d();
    let m = 2 * d;
    let df = d as f64;
    let th = s.theta();
    let lam = s.as_complex();
    let um = gauge_transform(&inst.u, &s, GaugeSign::Minus);
    let v = inst.v.clone();
    let mut ju = Jet::new(d);
    let mut jm = Jet::new(d);
    let zero = Complex64::new(0.0, 0.0);
    let mut gm = vec![zero; m];
    let mut gu = vec![zero; m];
    let (fine, coarse) = q.integrate_levels(d, &inst.u.decay, 2, |p, r, out| {
        inst.u.jet_into(p, 2, &mut ju);
        um.jet_into(p, 1, &mut jm);
        jm.horizontal_into(p, &mut gm);
        let (vv, drv) = match &v {
            Some(v) => (v.value(d, p).re, v.radial_rv(d, p).re),
            None => (0.0, 0.0),
        };
        let f = -ju.sublaplacian(p) - ju.value * vv + lam * ju.value;
        let g2: f64 = gm.iter().map(|c| c.norm_sqr()).sum();
        let um2 = jm.value.norm_sqr();
        ju.horizontal_into(p, &mut gu);
        let tu = ju.grad[m];
        let mut comm = zero;
        for j in 0..d {
            let (xu, yu) = (gu[j], gu[d + j]);
            comm += xu.conj() * (2.0 * p[d + j]) * (tu * -4.0) + yu.conj() * (2.0 * p[j]) * (tu * 4.0);
        }
        out[0] = (1.0 + b * r) * g2 - (df - 0.5) * b * um2 / r + b * r * vv * ju.value.norm_sqr() - drv * um2 + comm.re;
        let radial_conj: Complex64 = (0..m).map(|a| gm[a].conj() * (p[a] / r)).sum();
        let phase = Complex64::from_polar(1.0, -th * r);
        let brace = ((2.0 * df - 1.0) / r + b) * jm.value.conj() + 2.0 * radial_conj;
        out[1] = -(r * f * phase * brace).re;
    });
    let rel = |v: &[f64]| (v[0] - v[1]).abs() / v[0].abs().max(v[1].abs()).max(f64::MIN_POSITIVE);
    let res = rel(&fine);
    let id = if inst.v.is_some() { "am-finalV[direct]" } else { "am-final[direct]" };
    Ok(IdentityResidual {
        id: id.into(),
        member: inst.u.id.clone(),
        lambda: s,
        lhs: fine[0],
        rhs: fine[1],
        scale: fine[0].abs().max(fine[1].abs()),
        residual: res,
        residual_coarse: rel(&coarse),
        tol: IDENTITY_TOL,
        holds: res <= IDENTITY_TOL,
    })
}

/// Multiplier identities for one instance (free equation only); `Φ₃ = |z|²`.
pub fn check_multiplier_identities(
    inst: &ResolventInstance,
    phi1: &[Multiplier1],
    phi2: &[Multiplier2],
    q: &Quadrature,
) -> Result<Vec<IdentityResidual>> {
    if inst.v.as_ref().is_some_and(|v| !v.is_zero()) {
        return Err(Error::Capability("multiplier identities are evaluated for the free equation".into()));
    }
    let m = inst.moments(q);
    let mut out = Vec::new();
    for &p in phi1 {
        if let Some(r) = fond1(&m, inst.s, p)? {
            out.push(r);
        }
    }
    for &p in phi2 {
        out.push(fond2(&m, inst.s, p));
    }
    out.push(fond3(&m, inst.s, false));
    if inst.s.l1 >= 0.0 {
        out.push(comp1(&m, inst.s, false));
    }
    Ok(out)
}

/// `|∇u^−|² = |∇u|² + λ₁|u|² − 2θ Im(ω·ū∇u)` at each point, the left side
/// from the jets of `u^−`; returns the largest relative gap.
pub fn gradumeno_pointwise_residual(inst: &ResolventInstance, points: &[Vec<f64>]) -> f64 {
    let d = inst.d();
    let m = 2 * d;
    let s = inst.s;
    let th = s.theta();
    let um = gauge_transform(&inst.u, &s, GaugeSign::Minus);
    let zero = Complex64::new(0.0, 0.0);
    let (mut g, mut gm) = (vec![zero; m], vec![zero; m]);
    let mut worst: f64 = 0.0;
    for p in points {
        let r = p[..m].iter().map(|x| x * x).sum::<f64>().sqrt();
        if r < crate::hgroup::EPS_AXIS {
            continue;
        }
        let ju = inst.u.jet(p, 1);
        let jm = um.jet(p, 1);
        ju.horizontal_into(p, &mut g);
        jm.horizontal_into(p, &mut gm);
        let lhs: f64 = gm.iter().map(|c| c.norm_sqr()).sum();
        let g2: f64 = g.iter().map(|c| c.norm_sqr()).sum();
        let radial: Complex64 = (0..m).map(|a| g[a] * (p[a] / r)).sum();
        let rhs = g2 + s.l1.abs() * ju.value.norm_sqr() - 2.0 * th * (ju.value.conj() * radial).im;
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300));
    }
    worst
}

/// `|δRe∫ūf − Im∫ūf| ≤ ((δ+1)/(d−1))‖|z|f‖‖∇_H u‖` (free equation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub member: String,
    pub lambda: SpectralParam,
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub quad_error: f64,
    pub holds: bool,
}

pub fn est1_chain(m: &Moments, s: SpectralParam, delta: f64) -> ChainCheck {
    let lam = s.as_complex();
    let dm1 = (m.d - 1) as f64;
    let (lhs, el) = m.eval(|ms| {
        let (f1, _, _) = pairings(ms, lam);
        (delta * f1.re - f1.im).abs()
    });
    let (rhs, er) = m.eval(|ms| (delta + 1.0) / dm1 * zf_norm(ms, lam) * ms.g.max(0.0).sqrt());
    ChainCheck {
        member: m.member.clone(),
        lambda: s,
        delta,
        lhs,
        rhs,
        quad_error: el + er,
        holds: lhs <= rhs + 3.0 * (el + er),
    }
}

/// The quadratic inequality `X² − aZX − cZ² ≤ 0` in `X = ‖∇u^−‖`, `Z = ‖|z|f‖`
/// and the root bound it implies, at the minimizing `γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParabolaCheck {
    pub member: String,
    pub lambda: SpectralParam,
    pub delta: f64,
    pub gamma: f64,
    pub x: f64,
    pub z: f64,
    pub quadratic: f64,
    pub root_bound: f64,
    pub quadratic_nonpositive: bool,
    /// `quadratic ≤ 0 ⇒ X ≤ root_bound`.
    pub implication_holds: bool,
}

pub fn parabola_check(m: &Moments, s: SpectralParam, delta: f64) -> Result<ParabolaCheck> {
    let d = m.d;
    let dm1 = (d - 1) as f64;
    let (_, gamma) = k_db_argmin(d, delta, 0.0)?;
    let sd = delta.sqrt();
    let a = (8.0 * d as f64 - 6.0 + gamma * sd) / (2.0 * dm1);
    let c = sd / (2.0 * gamma);
    let x = grad_uminus_norm(&m.fine, s.theta());
    let z = zf_norm(&m.fine, s.as_complex());
    let quadratic = x * x - a * z * x - c * z * z;
    let root = 0.5 * a + (0.25 * a * a + c).sqrt();
    let root_bound = root * z;
    let nonpos = quadratic <= 0.0;
    Ok(ParabolaCheck {
        member: m.member.clone(),
        lambda: s,
        delta,
        gamma,
        x,
        z,
        quadratic,
        root_bound,
        quadratic_nonpositive: nonpos,
        implication_holds: !nonpos || x <= root_bound * (1.0 + 1e-12),
    })
}

/// Exploratory: `‖∇_H(e^{−iθN}u)‖` against `K_d(δ)‖N f‖` with the Koranyi
/// gauge `N` in place of `|z|`. Reported, never judged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KoranyiProbe {
    pub member: String,
    pub lambda: SpectralParam,
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

pub fn koranyi_probe(m: &Moments, s: SpectralParam, delta: f64, k_d: f64) -> KoranyiProbe {
    let th = s.theta();
    let ms = &m.fine;
    let lhs = (ms.g + th * th * ms.kn_g2 - 2.0 * th * ms.kn_s).max(0.0).sqrt();
    let rhs = k_d * nf_norm(ms, s.as_complex());
    KoranyiProbe {
        member: m.member.clone(),
        lambda: s,
        delta,
        lhs,
        rhs,
        margin: rhs - lhs,
    }
}
