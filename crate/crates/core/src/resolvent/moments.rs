//! One quadrature pass per (field, potential): every quantity the theorem
//! checks and multiplier identities need, as λ-independent integrals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fields::{PolyExp, Polynomial, Quadrature, TestField};
use crate::hgroup::{ClosedForm, Jet, KoranyiNorm};
use crate::potentials::PotentialSpec;

/// λ-independent integrals of `u`, `g = ∇_H u`, `L = 𝓛u + Vu`.
/// `D = z·g`, `N` the Koranyi gauge, `Φ₃ = |z|²` (through exact partials).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    /// `∫|g|²`
    pub g: f64,
    /// `∫|u|²`
    pub u: f64,
    /// `∫|u|²/|z|`
    pub u_r1: f64,
    /// `∫|u|²/|z|²`
    pub u_r2: f64,
    /// `∫|z||u|²`
    pub u_r: f64,
    /// `∫|z||g|²`
    pub g_r: f64,
    /// `Im∫ ū D/|z|`
    pub s: f64,
    /// `Im∫ ū D`
    pub s_r: f64,
    /// `∫|u|²/N²`
    pub u_n2: f64,
    /// `∫|z|²|L|²`, `∫|z|² L̄u`, `∫|z|²|u|²`
    pub a: f64,
    pub b: Complex64,
    pub c: f64,
    /// Same with weight `N²`.
    pub a_n: f64,
    pub b_n: Complex64,
    pub c_n: f64,
    /// `∫ L ū`, `∫|z| L ū`, `∫ L D̄`, `∫ u D̄`
    pub l1: Complex64,
    pub lr: Complex64,
    pub lg: Complex64,
    pub ug: Complex64,
    /// `∫ V|u|²`, `∫|z|V|u|²`, `∫ ∂_r(|z|V)|u|²`
    pub vu: f64,
    pub rvu: f64,
    pub drv_u: f64,
    /// `∫ ∇ū·∇²_HΦ₃∇u`
    pub hess3: f64,
    /// `∫ 𝓛Φ₃|u|²`, `∫ 𝓛Φ₃ L ū`
    pub lphi3_u: f64,
    pub lphi3_l: Complex64,
    /// `∫ ∇Φ₃·ū∇u`, `∫ L ∇Φ₃·∇ū`, `∫ u ∇Φ₃·∇ū`
    pub dphi3_su: Complex64,
    pub dphi3_lg: Complex64,
    pub dphi3_ug: Complex64,
    /// `∫|∇_H N|²|u|²`, `Im∫ ū ∇_H N·g`
    pub kn_g2: f64,
    pub kn_s: f64,
    /// `Re∫ Σ_{a,b} ∂_aū ∂_bΦ₃ [∂_a, ∂_b]u` over the horizontal fields;
    /// only `[X_j, Y_j] = −4T` contributes.
    pub comm3: f64,
}

const K: usize = 43;

impl MomentSet {
    fn from_slice(v: &[f64]) -> Self {
        let c = |i: usize| Complex64::new(v[i], v[i + 1]);
        MomentSet {
            g: v[0],
            u: v[1],
            u_r1: v[2],
            u_r2: v[3],
            u_r: v[4],
            g_r: v[5],
            s: v[6],
            s_r: v[7],
            u_n2: v[8],
            a: v[9],
            b: c(10),
            c: v[12],
            a_n: v[13],
            b_n: c(14),
            c_n: v[16],
            l1: c(17),
            lr: c(19),
            lg: c(21),
            ug: c(23),
            vu: v[25],
            rvu: v[26],
            drv_u: v[27],
            hess3: v[28],
            lphi3_u: v[29],
            lphi3_l: c(30),
            dphi3_su: c(32),
            dphi3_lg: c(34),
            dphi3_ug: c(36),
            kn_g2: v[38],
            kn_s: v[39],
            comm3: v[40],
        }
        // v[41..43] are spare slots kept zero
    }
}

/// Moments at the fine and coarse quadrature levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub d: usize,
    pub member: String,
    pub potential: Option<PotentialSpec>,
    pub fine: MomentSet,
    pub coarse: MomentSet,
    /// Largest `|𝓛²Φ₃|` seen at the stencil sample points.
    pub bilap_phi3: f64,
}

impl Moments {
    /// Apply `f` to both levels; returns `(fine value, |fine − coarse|)`.
    pub fn eval(&self, f: impl Fn(&MomentSet) -> f64) -> (f64, f64) {
        let a = f(&self.fine);
        (a, (a - f(&self.coarse)).abs())
    }
}

/// `Φ₃ = |z|²` as a closed-form field.
pub fn phi3(d: usize) -> PolyExp {
    let n = 2 * d + 1;
    PolyExp::new(d, Polynomial::z_norm_sqr(n), Polynomial::zero(n))
}

/// Single-pass moment computation.
pub fn compute_moments(u: &TestField, v: Option<&PotentialSpec>, q: &Quadrature) -> Moments {
    let d = u.dim();
    let m = 2 * d;
    let phi = phi3(d);
    let kor = KoranyiNorm { d };
    let mut ju = Jet::new(d);
    let mut jp = Jet::new(d);
    let mut jk = Jet::new(d);
    let zero = Complex64::new(0.0, 0.0);
    let mut g = vec![zero; m];
    let mut gp = vec![zero; m];
    let mut gk = vec![zero; m];
    let mut hp = vec![zero; m * m];
    let (fine, coarse) = q.integrate_levels(d, &u.decay, K, |p, r, out| {
        u.jet_into(p, 2, &mut ju);
        ju.horizontal_into(p, &mut g);
        let uu = ju.value;
        let (vv, drv) = match v {
            Some(v) => (v.value(d, p).re, v.radial_rv(d, p).re),
            None => (0.0, 0.0),
        };
        let l = ju.sublaplacian(p) + uu * vv;
        let u2 = uu.norm_sqr();
        let g2: f64 = g.iter().map(|c| c.norm_sqr()).sum();
        let dz: Complex64 = (0..m).map(|a| g[a] * p[a]).sum();
        let ub = uu.conj();
        let t = p[m];
        let n2 = (r.powi(4) + t * t).sqrt();
        let r2 = r * r;

        out[0] = g2;
        out[1] = u2;
        out[2] = u2 / r;
        out[3] = u2 / r2;
        out[4] = r * u2;
        out[5] = r * g2;
        let sd = (ub * dz).im;
        out[6] = sd / r;
        out[7] = sd;
        out[8] = u2 / n2;
        out[9] = r2 * l.norm_sqr();
        let b = l.conj() * uu * r2;
        out[10] = b.re;
        out[11] = b.im;
        out[12] = r2 * u2;
        out[13] = n2 * l.norm_sqr();
        let bn = l.conj() * uu * n2;
        out[14] = bn.re;
        out[15] = bn.im;
        out[16] = n2 * u2;
        let l1 = l * ub;
        out[17] = l1.re;
        out[18] = l1.im;
        out[19] = r * l1.re;
        out[20] = r * l1.im;
        let lg = l * dz.conj();
        out[21] = lg.re;
        out[22] = lg.im;
        let ug = uu * dz.conj();
        out[23] = ug.re;
        out[24] = ug.im;
        out[25] = vv * u2;
        out[26] = r * vv * u2;
        out[27] = drv * u2;

        phi.jet_into(p, 2, &mut jp);
        jp.horizontal_into(p, &mut gp);
        jp.horizontal_hessian_into(p, &mut hp);
        let mut h3 = zero;
        for a in 0..m {
            for c in 0..m {
                h3 += g[a].conj() * hp[a * m + c] * g[c];
            }
        }
        out[28] = h3.re;
        let lphi = jp.sublaplacian(p).re;
        out[29] = lphi * u2;
        out[30] = lphi * l1.re;
        out[31] = lphi * l1.im;
        let gphi_g: Complex64 = (0..m).map(|a| gp[a] * g[a]).sum();
        let su = ub * gphi_g;
        out[32] = su.re;
        out[33] = su.im;
        let lgp = l * gphi_g.conj();
        out[34] = lgp.re;
        out[35] = lgp.im;
        let ugp = uu * gphi_g.conj();
        out[36] = ugp.re;
        out[37] = ugp.im;

        kor.jet_into(p, 1, &mut jk);
        jk.horizontal_into(p, &mut gk);
        let kg2: f64 = gk.iter().map(|c| c.re * c.re).sum();
        out[38] = kg2 * u2;
        let kd: Complex64 = (0..m).map(|a| g[a] * gk[a].re).sum();
        out[39] = (ub * kd).im;

        let tu = ju.grad[m];
        let mut cm = zero;
        for j in 0..d {
            cm += g[j].conj() * gp[d + j] * (tu * -4.0) + g[d + j].conj() * gp[j] * (tu * 4.0);
        }
        out[40] = cm.re;
    });
    Moments {
        d,
        member: u.id.clone(),
        potential: v.cloned(),
        fine: MomentSet::from_slice(&fine),
        coarse: MomentSet::from_slice(&coarse),
        bilap_phi3: bilaplacian_phi3(d),
    }
}

/// `max |𝓛(𝓛Φ₃)|` over a few sample points, with the inner `𝓛` exact and the
/// outer one a second-order stencil.
pub fn bilaplacian_phi3(d: usize) -> f64 {
    use crate::hgroup::{HPoint, Stencil};
    let phi = phi3(d);
    let inner = |p: &[f64]| {
        let mut j = Jet::new(d);
        phi.jet_into(p, 2, &mut j);
        j.sublaplacian(p)
    };
    let st = Stencil::new(1e-3);
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let c: Vec<f64> = (0..2 * d + 1).map(|a| ((k * 7 + a * 3) % 11) as f64 / 5.0 - 1.0).collect();
        if let Ok(p) = HPoint::from_coords(d, &c) {
            if let Ok(v) = st.sublaplacian(&inner, &p) {
                worst = worst.max(v.norm());
            }
        }
    }
    worst
}
