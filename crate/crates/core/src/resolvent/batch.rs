//! Family-quantified suites and JSON batch specs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::identities::{am_final_moments, est1_chain, koranyi_probe, multiplier_identities, parabola_check};
use super::{
    compute_moments, perturbed_verdicts, thm1_verdicts, ChainCheck, FreeConstants, IdentityResidual,
    InequalityVerdict, KoranyiProbe, Moments, ParabolaCheck, PerturbedThmConstants,
};
use crate::constants::delta_star;
use crate::error::{Error, Result};
use crate::fields::{
    builtin_family, gauge_transform, gaussian, ConeConvention, ConeSide, GaugeSign, Preset, Quadrature, SpectralParam,
    TestField,
};
use crate::potentials::{potential_bounds, PotentialSpec};

/// Twelve spectral parameters covering both cones: `λ₂ = 0`, `λ₁ = 0`,
/// `λ₁ < 0`, and the boundaries `|λ₂| = δ|λ₁|` for `δ ∈ {δ*, 1, 5}`.
pub fn default_lambda_grid(d: usize) -> Result<Vec<SpectralParam>> {
    let ds: f64 = delta_star(d)?;
    Ok(vec![
        SpectralParam::new(1.0, 0.0),
        SpectralParam::new(0.25, 0.0),
        SpectralParam::new(0.0, 1.0),
        SpectralParam::new(0.0, -0.3),
        SpectralParam::new(-1.0, 0.5),
        SpectralParam::new(-0.5, -2.0),
        SpectralParam::new(1.0, 1.0),
        SpectralParam::new(0.2, 1.0),
        SpectralParam::new(1.0, ds),
        SpectralParam::new(2.0, 0.1),
        SpectralParam::new(0.5, -0.05),
        SpectralParam::new(0.3, 3.0),
    ])
}

/// `{δ*, 1, 5}`.
pub fn default_deltas(d: usize) -> Result<Vec<f64>> {
    Ok(vec![delta_star(d)?, 1.0, 5.0])
}

/// A potential with the certified constants its theorems need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialCase {
    pub name: String,
    pub spec: PotentialSpec,
    /// Positive-potential theorem constant (`None` when `V ≥ 0` fails or no
    /// certified bound exists).
    pub b: Option<f64>,
    /// `(b₁, b₂)` of the real-potential theorem.
    pub b12: Option<(f64, f64)>,
}

impl PotentialCase {
    /// Certified constants in analytic mode.
    pub fn analytic(d: usize, name: &str, spec: PotentialSpec) -> Result<Self> {
        let bounds = potential_bounds(d, &spec, None)?;
        let nonneg = super::check_nonnegative(&spec, d).is_ok();
        let b = if nonneg { bounds.b2.upper.filter(|&b| b < 1.0) } else { None };
        let b12 = match (bounds.b1.upper, bounds.b2.upper) {
            (Some(b1), Some(b2)) if b1 < 1.0 && b2 < 1.0 => Some((b1, b2)),
            _ => None,
        };
        Ok(Self {
            name: name.into(),
            spec,
            b,
            b12,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub d: usize,
    pub seed: u64,
    pub members: usize,
    pub lambdas: Vec<SpectralParam>,
    pub deltas: Vec<f64>,
    pub quad: Quadrature,
    pub free: bool,
    /// Number of leading members also run with the phase `e^{i|z|}` applied;
    /// the built-in members are real, and the `λ₂` terms of the identities
    /// vanish on real fields.
    pub twisted: usize,
    pub potentials: Vec<PotentialCase>,
}

impl SuiteConfig {
    pub fn standard(d: usize, seed: u64, members: usize) -> Result<Self> {
        Ok(Self {
            d,
            seed,
            members,
            lambdas: default_lambda_grid(d)?,
            deltas: default_deltas(d)?,
            quad: Quadrature::preset(Preset::Standard, d),
            free: true,
            twisted: 0,
            potentials: vec![],
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub d: usize,
    pub seed: u64,
    pub members: Vec<String>,
    pub verdicts: Vec<InequalityVerdict>,
    pub identities: Vec<IdentityResidual>,
    pub chains: Vec<ChainCheck>,
    pub parabolas: Vec<ParabolaCheck>,
    pub probes: Vec<KoranyiProbe>,
    /// Potential name per verdict block, in order.
    pub potential_verdicts: Vec<(String, InequalityVerdict)>,
}

impl SuiteReport {
    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass) && self.potential_verdicts.iter().all(|(_, v)| v.pass)
    }

    /// Identities that are expected to hold (the `-displayed` variants are not).
    pub fn checked_identities(&self) -> impl Iterator<Item = &IdentityResidual> {
        self.identities.iter().filter(|r| !r.id.contains("-displayed"))
    }

    pub fn all_identities_hold(&self) -> bool {
        self.checked_identities().all(|r| r.holds)
    }

    pub fn worst_identity(&self) -> Option<&IdentityResidual> {
        self.checked_identities().max_by(|a, b| a.residual.total_cmp(&b.residual))
    }

    pub fn all_chains_hold(&self) -> bool {
        self.chains.iter().all(|c| c.holds) && self.parabolas.iter().all(|p| p.implication_holds)
    }
}

/// Runs the theorem suite: one moment pass per (member, potential), all
/// `(λ, δ)` verdicts assembled from it.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let family = builtin_family(cfg.d, cfg.seed);
    if cfg.members > family.len() {
        return Err(Error::Domain(format!("the family has {} members", family.len())));
    }
    let mut members: Vec<TestField> = family[..cfg.members].to_vec();
    let twist = SpectralParam::new(1.0, 0.0);
    for u in family[..cfg.twisted.min(cfg.members)].iter() {
        members.push(gauge_transform(u, &twist, GaugeSign::Plus));
    }
    let free_consts: Vec<FreeConstants> =
        cfg.deltas.iter().map(|&dl| FreeConstants::new(cfg.d, dl)).collect::<Result<_>>()?;
    let pert_consts: Vec<Vec<PerturbedThmConstants>> = cfg
        .potentials
        .iter()
        .map(|pc| cfg.deltas.iter().map(|&dl| PerturbedThmConstants::new(cfg.d, dl, pc.b, pc.b12)).collect())
        .collect::<Result<_>>()?;
    let mut rep = SuiteReport {
        d: cfg.d,
        seed: cfg.seed,
        members: members.iter().map(|m| m.id.clone()).collect(),
        ..Default::default()
    };
    for u in &members {
        if cfg.free {
            let m = compute_moments(u, None, &cfg.quad);
            for &s in &cfg.lambdas {
                rep.identities.extend(multiplier_identities(&m, s)?);
                for c in &free_consts {
                    rep.verdicts.extend(thm1_verdicts(&m, s, c));
                    rep.chains.push(est1_chain(&m, s, c.delta));
                    if s.l1 >= 0.0 && s.classify(c.delta, ConeConvention::AbsLambda1) != ConeSide::Outside {
                        rep.parabolas.push(parabola_check(&m, s, c.delta)?);
                        rep.probes.push(koranyi_probe(&m, s, c.delta, c.k_d));
                    }
                }
            }
        }
        for (pc, consts) in cfg.potentials.iter().zip(&pert_consts) {
            let m = compute_moments(u, Some(&pc.spec), &cfg.quad);
            for &s in &cfg.lambdas {
                if s.l1 >= 0.0 && !(s.l1 == 0.0 && s.l2 != 0.0) {
                    let mut r = am_final_moments(&m, s)?;
                    r.id = format!("{}[{}]", r.id, pc.name);
                    rep.identities.push(r);
                }
                for c in consts {
                    for v in perturbed_verdicts(&m, s, c) {
                        rep.potential_verdicts.push((pc.name.clone(), v));
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// Which theorem a batch entry checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "thm1")]
    Free,
    #[serde(rename = "thm-pp")]
    PositivePotential,
    #[serde(rename = "thm16")]
    RealPotential,
}

/// A family member by id, or an explicit Gaussian `e^{−a|z|² − bt²}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldRef {
    Member(String),
    Gaussian { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub field: FieldRef,
    pub lambda1: f64,
    pub lambda2: f64,
    pub delta: f64,
    pub theorem: Theorem,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
}

fn default_preset() -> Preset {
    Preset::Standard
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSpec {
    pub d: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_preset")]
    pub quad: Preset,
    pub entries: Vec<BatchEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub verdicts: Vec<InequalityVerdict>,
    pub all_pass: bool,
}

impl BatchReport {
    /// One line per verdict.
    pub fn csv(&self) -> String {
        let mut s = String::from("id,member,lambda,delta,cone,lhs,rhs,constant,margin,quad_error,pass\n");
        for v in &self.verdicts {
            let id = serde_json::to_value(v.id).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default();
            let cone = serde_json::to_value(v.cone).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default();
            s.push_str(&format!(
                "{id},{},{},{},{cone},{:e},{:e},{:e},{:e},{:e},{}\n",
                v.member, v.lambda, v.delta, v.lhs, v.rhs, v.constant, v.margin, v.quad_error, v.pass
            ));
        }
        s
    }
}

fn resolve_field(d: usize, seed: u64, family: &[TestField], f: &FieldRef) -> Result<TestField> {
    match f {
        FieldRef::Member(id) => family
            .iter()
            .find(|m| &m.id == id)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("unknown member '{id}' (d = {d}, seed = {seed})"))),
        FieldRef::Gaussian { a, b } => {
            if !(*a > 0.0 && *b > 0.0) {
                return Err(Error::Domain("gaussian rates must be positive".into()));
            }
            Ok(gaussian(d, *a, *b))
        }
    }
}

/// Runs a batch; moments are shared between entries with the same field and potential.
pub fn run_batch(spec: &BatchSpec) -> Result<BatchReport> {
    let d = spec.d;
    let family = builtin_family(d, spec.seed);
    let q = Quadrature::preset(spec.quad, d);
    let mut cache: BTreeMap<String, Moments> = BTreeMap::new();
    let mut verdicts = Vec::new();
    for e in &spec.entries {
        let u = resolve_field(d, spec.seed, &family, &e.field)?;
        let s = SpectralParam::new(e.lambda1, e.lambda2);
        let v = match e.theorem {
            Theorem::Free => None,
            _ => Some(
                e.potential
                    .clone()
                    .ok_or_else(|| Error::Domain("potential theorems need a potential".into()))?,
            ),
        };
        if let Some(v) = &v {
            if !v.is_real() {
                return Err(Error::Domain("the resolvent equation takes a real potential".into()));
            }
        }
        let key = format!("{}|{}", u.id, serde_json::to_string(&v).unwrap_or_default());
        let m = cache.entry(key).or_insert_with(|| compute_moments(&u, v.as_ref(), &q));
        match e.theorem {
            Theorem::Free => verdicts.extend(thm1_verdicts(m, s, &FreeConstants::new(d, e.delta)?)),
            Theorem::PositivePotential => {
                let pc = PotentialCase::analytic(d, "batch", v.unwrap())?;
                let b = pc.b.ok_or_else(|| {
                    Error::HypothesisViolation("no certified b < 1 with V >= 0 for the positive-potential theorem".into())
                })?;
                let c = PerturbedThmConstants::new(d, e.delta, Some(b), None)?;
                verdicts.extend(perturbed_verdicts(m, s, &c));
            }
            Theorem::RealPotential => {
                let pc = PotentialCase::analytic(d, "batch", v.unwrap())?;
                let b12 = pc
                    .b12
                    .ok_or_else(|| Error::HypothesisViolation("no certified b1, b2 < 1".into()))?;
                let c = PerturbedThmConstants::new(d, e.delta, None, Some(b12))?;
                verdicts.extend(perturbed_verdicts(m, s, &c));
            }
        }
    }
    let all_pass = verdicts.iter().all(|v| v.pass);
    Ok(BatchReport { verdicts, all_pass })
}
