//! Command-line driver: constants tables, Hardy suites, resolvent batches,
//! multiplier identities and potential decisions, written as JSON/CSV reports.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use heisenberg_core::constants::{self, format_5, round_5};
use heisenberg_core::fields::{builtin_family, Preset, Quadrature, SpectralParam};
use heisenberg_core::hardy::{self, HardyKind, HardySpec};
use heisenberg_core::potentials::{self, PotentialSpec};
use heisenberg_core::resolvent::{self, BatchSpec, PotentialCase, SuiteConfig};
use heisenberg_core::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "heisenberg", version, about = "Constants, Hardy and resolvent-estimate checks on the Heisenberg group")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// (d, δ*, κ_d) table as CSV.
    Table(Common),
    /// Full constants report; K_d(δ) for each --delta; perturbed constants when any --b* is given.
    Constants(ConstantsArgs),
    /// Hardy inequalities on the test family, with an optional sharpness probe.
    Hardy(HardyArgs),
    /// Resolvent estimates in manufactured mode.
    Resolvent(ResolventArgs),
    /// Multiplier identities only.
    Identities(IdentitiesArgs),
    /// Certified bounds and eigenvalue-absence decisions for potentials.
    PotentialCheck(PotentialArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quad {
    Fast,
    Standard,
    Thorough,
}

impl From<Quad> for Preset {
    fn from(q: Quad) -> Self {
        match q {
            Quad::Fast => Preset::Fast,
            Quad::Standard => Preset::Standard,
            Quad::Thorough => Preset::Thorough,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Dimensions: `2`, `2,3` or `2..6` (inclusive).
    #[arg(long = "d", default_value = "2", value_parser = parse_dims)]
    pub dims: Dims,
    /// Cone openings (repeatable).
    #[arg(long = "delta")]
    pub delta: Vec<f64>,
    /// Spectral parameters `a+bi` (repeatable).
    #[arg(long = "lambda", allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: Vec<SpectralParam>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "standard")]
    pub quad: Quad,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    #[arg(long)]
    pub b3: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct HardyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100)]
    pub members: usize,
    /// Also run the sharpness sweep for the horizontal and weighted inequalities.
    #[arg(long)]
    pub probe: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ResolventArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 20)]
    pub members: usize,
    /// Phase-twisted copies of the first members (exercise complex-valued terms).
    #[arg(long, default_value_t = 0)]
    pub twisted: usize,
    /// Potential: JSON spec, or `inv-sq:c` (c|z|⁻²), `gauss:c` (c e^{−|z|²}). Repeatable.
    #[arg(long = "potential", allow_hyphen_values = true, value_parser = parse_potential)]
    pub potential: Vec<PotentialSpec>,
    /// Skip the free-equation checks (only meaningful with --potential).
    #[arg(long)]
    pub no_free: bool,
    /// Run a JSON batch file instead of the suite.
    #[arg(long)]
    pub batch: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IdentitiesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 20)]
    pub members: usize,
    #[arg(long, default_value_t = 4)]
    pub twisted: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "potential", required = true, allow_hyphen_values = true, value_parser = parse_potential)]
    pub potential: Vec<PotentialSpec>,
    /// Also sample Rayleigh quotients on this many family members (empirical lower bounds).
    #[arg(long, default_value_t = 0)]
    pub family: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims(pub Vec<usize>);

pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let bad = || format!("expected `d`, `d1,d2,…` or `lo..hi`, got '{s}'");
    let v: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi): (usize, usize) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if v.is_empty() || v.iter().any(|&d| d == 0) {
        return Err("dimensions must be positive".into());
    }
    Ok(Dims(v))
}

pub fn parse_lambda(s: &str) -> Result<SpectralParam, String> {
    s.parse::<SpectralParam>().map_err(|e| e.to_string())
}

pub fn parse_potential(s: &str) -> Result<PotentialSpec, String> {
    let coef = |rest: &str| rest.parse::<f64>().map_err(|_| format!("bad coefficient in '{s}'"));
    if let Some(c) = s.strip_prefix("inv-sq:") {
        Ok(PotentialSpec::power(coef(c)?, -2.0))
    } else if let Some(c) = s.strip_prefix("gauss:") {
        Ok(PotentialSpec::gaussian(coef(c)?, 1.0))
    } else if s == "zero" {
        Ok(PotentialSpec::zero())
    } else {
        serde_json::from_str(s).map_err(|e| format!("bad potential '{s}': {e}"))
    }
}

/// Failure of a run, carrying its exit code.
#[derive(Debug)]
pub struct RunError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Accuracy { .. } | Error::Solver { .. } => exit::NUMERICAL,
            Error::InternalConsistency { .. } => exit::FAIL,
            _ => exit::USAGE,
        };
        RunError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError { code: exit::USAGE, message: format!("output: {e}") }
    }
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError { code: exit::USAGE, message: msg.into() }
}

/// Summary of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn code(&self) -> i32 {
        if self.pass {
            exit::PASS
        } else {
            exit::FAIL
        }
    }
}

/// Writes reports into one directory. The wall-clock timestamp lives only in
/// `header`, so everything else is byte-identical across reruns.
struct Writer {
    dir: PathBuf,
    format: Format,
    command: &'static str,
    files: Vec<PathBuf>,
}

impl Writer {
    fn new(c: &Common, command: &'static str) -> Result<Self, RunError> {
        fs::create_dir_all(&c.out)?;
        Ok(Self { dir: c.out.clone(), format: c.format, command, files: vec![] })
    }

    fn json(&mut self, name: &str, config: Value, results: impl Serialize) -> Result<(), RunError> {
        if self.format == Format::Csv {
            return Ok(());
        }
        let doc = json!({
            "header": header(),
            "command": self.command,
            "config": config,
            "results": results,
        });
        let text = serde_json::to_string_pretty(&doc).map_err(|e| usage(e.to_string()))?;
        self.put(name, text + "\n")
    }

    fn csv(&mut self, name: &str, text: String) -> Result<(), RunError> {
        if self.format == Format::Json {
            return Ok(());
        }
        self.put(name, text)
    }

    fn put(&mut self, name: &str, text: String) -> Result<(), RunError> {
        let p = self.dir.join(name);
        fs::write(&p, text)?;
        self.files.push(p);
        Ok(())
    }
}

fn header() -> Value {
    let ts = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse::<u64>().ok()).unwrap_or_else(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "heisenberg",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "generated_at_unix": ts,
    })
}

fn common_config(c: &Common) -> Value {
    json!({
        "d": c.dims.0,
        "delta": c.delta,
        "lambda": c.lambda,
        "seed": c.seed,
        "quad": format!("{:?}", c.quad).to_lowercase(),
    })
}

fn require_d2(dims: &Dims) -> Result<(), RunError> {
    match dims.0.iter().find(|&&d| d < 2) {
        Some(d) => Err(usage(format!("d = {d}: this command needs d ≥ 2"))),
        None => Ok(()),
    }
}

pub fn run(cli: Cli) -> Result<Outcome, RunError> {
    match cli.command {
        Command::Table(c) => run_table(&c),
        Command::Constants(a) => run_constants(&a),
        Command::Hardy(a) => run_hardy(&a),
        Command::Resolvent(a) => run_resolvent(&a),
        Command::Identities(a) => run_identities(&a),
        Command::PotentialCheck(a) => run_potentials(&a),
    }
}

fn table_rows_json(rows: &[constants::TableRow]) -> Vec<Value> {
    rows.iter()
        .map(|r| {
            json!({
                "d": r.d,
                "delta_star": r.delta_star,
                "kappa_d": r.kappa_d,
                "display": { "delta_star": format_5(r.delta_star), "kappa_d": format_5(r.kappa_d) },
            })
        })
        .collect()
}

fn run_table(c: &Common) -> Result<Outcome, RunError> {
    require_d2(&c.dims)?;
    let rows = constants::table(&c.dims.0)?;
    let csv = constants::table_csv(&rows);
    let mut w = Writer::new(c, "table")?;
    w.csv("constants.csv", csv.clone())?;
    w.json("constants.json", common_config(c), table_rows_json(&rows))?;
    Ok(Outcome { pass: true, files: w.files, summary: csv.lines().map(String::from).collect() })
}

fn run_constants(a: &ConstantsArgs) -> Result<Outcome, RunError> {
    let c = &a.common;
    require_d2(&c.dims)?;
    let perturbed = a.b.is_some() || a.b1.is_some() || a.b2.is_some() || a.b3.is_some();
    let (b, b1, b2, b3) = (a.b.unwrap_or(0.0), a.b1.unwrap_or(0.0), a.b2.unwrap_or(0.0), a.b3.unwrap_or(0.0));
    let mut summary = Vec::new();
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for &d in &c.dims.0 {
        let rep = constants::kappa_d(d)?;
        let deltas = if c.delta.is_empty() { vec![rep.delta_star] } else { c.delta.clone() };
        let mut kd = Vec::new();
        let mut pert = Vec::new();
        for &delta in &deltas {
            let k = constants::K_d(d, delta)?;
            summary.push(format!("d={d} delta={delta} K_d={}", round_5(k)));
            kd.push(json!({ "delta": delta, "k_d": k, "display": format_5(k) }));
            if perturbed {
                pert.push(constants::perturbed_constants(d, delta, b, b1, b2, b3)?);
            }
        }
        summary.push(format!("d={d} delta_star={} kappa_d={}", format_5(rep.delta_star), format_5(rep.kappa())));
        rows.push(constants::TableRow { d, delta_star: rep.delta_star, kappa_d: rep.kappa() });
        results.push(json!({
            "d": d,
            "report": rep,
            "display": { "delta_star": format_5(rep.delta_star), "kappa_d": format_5(rep.kappa()) },
            "k_d": kd,
            "perturbed": if perturbed { json!(pert) } else { Value::Null },
        }));
    }
    let mut cfg = common_config(c);
    cfg["b"] = json!([a.b, a.b1, a.b2, a.b3]);
    let mut w = Writer::new(c, "constants")?;
    w.csv("constants.csv", constants::table_csv(&rows))?;
    w.json("constants.json", cfg, results)?;
    Ok(Outcome { pass: true, files: w.files, summary })
}

fn run_hardy(a: &HardyArgs) -> Result<Outcome, RunError> {
    let c = &a.common;
    let mut verdicts = Vec::new();
    let mut probes = Vec::new();
    let mut summary = Vec::new();
    for &d in &c.dims.0 {
        let q = Quadrature::preset(c.quad.into(), d);
        let v = hardy::hardy_suite(d, c.seed, a.members, &q);
        let fails = v.iter().filter(|x| !x.pass).count();
        let worst = v.iter().map(|x| x.quotient / x.constant).fold(0.0, f64::max);
        summary.push(format!("d={d} verdicts={} failures={fails} max_quotient/constant={worst:.6}", v.len()));
        verdicts.extend(v);
        if a.probe {
            let (eps, rates) = hardy::default_sweep();
            for kind in [HardyKind::Horizontal, HardyKind::WeightedHorizontal] {
                let spec = HardySpec::new(kind, d)?;
                let r = hardy::sharpness_probe(&spec, &eps, &rates, &q)?;
                summary.push(format!("d={d} probe {} best={:.6} constant={:.6}", r.spec, r.best, r.constant));
                probes.push(r);
            }
        }
    }
    let pass = verdicts.iter().all(|v| v.pass);
    let mut csv = String::from("spec,member,lhs,rhs,constant,quotient,quad_error,pass\n");
    for v in &verdicts {
        csv.push_str(&format!(
            "{},{},{:e},{:e},{:e},{:e},{:e},{}\n",
            v.spec, v.member, v.lhs, v.rhs, v.constant, v.quotient, v.quad_error, v.pass
        ));
    }
    let mut cfg = common_config(c);
    cfg["members"] = json!(a.members);
    let mut w = Writer::new(c, "hardy")?;
    w.csv("verdicts.csv", csv)?;
    w.json("verdicts.json", cfg, json!({ "all_pass": pass, "verdicts": verdicts, "sharpness": probes }))?;
    Ok(Outcome { pass, files: w.files, summary })
}

fn lambdas_or_default(c: &Common, d: usize) -> Result<Vec<SpectralParam>, RunError> {
    Ok(if c.lambda.is_empty() { resolvent::default_lambda_grid(d)? } else { c.lambda.clone() })
}

fn deltas_or_default(c: &Common, d: usize) -> Result<Vec<f64>, RunError> {
    if c.delta.iter().any(|&x| !(x > 0.0)) {
        return Err(usage("--delta must be positive"));
    }
    Ok(if c.delta.is_empty() { resolvent::default_deltas(d)? } else { c.delta.clone() })
}

fn run_resolvent(a: &ResolventArgs) -> Result<Outcome, RunError> {
    let c = &a.common;
    if let Some(path) = &a.batch {
        let text = fs::read_to_string(path)?;
        let spec: BatchSpec = serde_json::from_str(&text).map_err(|e| usage(format!("batch file: {e}")))?;
        let rep = resolvent::run_batch(&spec)?;
        let mut w = Writer::new(c, "resolvent")?;
        w.csv("verdicts.csv", rep.csv())?;
        w.json("verdicts.json", json!({ "batch": spec }), &rep)?;
        let fails = rep.verdicts.iter().filter(|v| !v.pass).count();
        let summary = vec![format!("batch verdicts={} failures={fails}", rep.verdicts.len())];
        return Ok(Outcome { pass: rep.all_pass, files: w.files, summary });
    }
    require_d2(&c.dims)?;
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    for &d in &c.dims.0 {
        let mut cfg = SuiteConfig::standard(d, c.seed, a.members)?;
        cfg.lambdas = lambdas_or_default(c, d)?;
        cfg.deltas = deltas_or_default(c, d)?;
        cfg.quad = Quadrature::preset(c.quad.into(), d);
        cfg.twisted = a.twisted;
        cfg.free = !a.no_free;
        cfg.potentials = a
            .potential
            .iter()
            .enumerate()
            .map(|(k, v)| PotentialCase::analytic(d, &format!("V{k}"), v.clone()))
            .collect::<Result<_, _>>()?;
        let rep = resolvent::run_suite(&cfg)?;
        let nv = rep.verdicts.len() + rep.potential_verdicts.len();
        let fails = rep.verdicts.iter().filter(|v| !v.pass).count()
            + rep.potential_verdicts.iter().filter(|(_, v)| !v.pass).count();
        let worst = rep.worst_identity().map_or(0.0, |r| r.residual);
        summary.push(format!(
            "d={d} verdicts={nv} failures={fails} identities={} worst_identity_residual={worst:.3e}",
            rep.checked_identities().count()
        ));
        reports.push((cfg, rep));
    }
    let pass = reports.iter().all(|(_, r)| r.all_verdicts_pass() && r.all_identities_hold());
    let mut csv = String::from("d,potential,id,member,lambda,delta,lhs,rhs,constant,margin,quad_error,pass\n");
    for (_, r) in &reports {
        let rows = r.verdicts.iter().map(|v| ("", v)).chain(r.potential_verdicts.iter().map(|(n, v)| (n.as_str(), v)));
        for (name, v) in rows {
            let id = serde_json::to_value(v.id).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default();
            csv.push_str(&format!(
                "{},{name},{id},{},{},{},{:e},{:e},{:e},{:e},{:e},{}\n",
                r.d, v.member, v.lambda, v.delta, v.lhs, v.rhs, v.constant, v.margin, v.quad_error, v.pass
            ));
        }
    }
    let cfg_json = json!({
        "common": common_config(c),
        "members": a.members,
        "twisted": a.twisted,
        "free": !a.no_free,
        "potentials": reports.first().map(|(cfg, _)| cfg.potentials.clone()).unwrap_or_default(),
    });
    let verdicts: Vec<Value> = reports
        .iter()
        .map(|(cfg, r)| {
            json!({
                "d": r.d,
                "lambdas": cfg.lambdas,
                "deltas": cfg.deltas,
                "members": r.members,
                "all_pass": r.all_verdicts_pass(),
                "verdicts": r.verdicts,
                "potential_verdicts": r.potential_verdicts,
                "chains": r.chains,
                "parabolas": r.parabolas,
                "probes": r.probes,
            })
        })
        .collect();
    let identities: Vec<Value> = reports.iter().map(|(_, r)| identities_json(r.d, &r.identities)).collect();
    let mut w = Writer::new(c, "resolvent")?;
    w.csv("verdicts.csv", csv)?;
    w.json("verdicts.json", cfg_json.clone(), verdicts)?;
    w.json("identities.json", cfg_json, identities)?;
    Ok(Outcome { pass, files: w.files, summary })
}

/// `*-displayed` ids are the as-printed forms without the commutator term;
/// they are reported but not expected to hold.
fn identities_json(d: usize, ids: &[resolvent::IdentityResidual]) -> Value {
    let checked: Vec<_> = ids.iter().filter(|r| !r.id.contains("-displayed")).collect();
    let worst = checked.iter().map(|r| r.residual).fold(0.0, f64::max);
    json!({
        "d": d,
        "all_hold": checked.iter().all(|r| r.holds),
        "worst_residual": worst,
        "display": { "worst_residual": format!("{worst:.3e}") },
        "identities": ids,
    })
}

fn run_identities(a: &IdentitiesArgs) -> Result<Outcome, RunError> {
    let c = &a.common;
    require_d2(&c.dims)?;
    let mut out = Vec::new();
    let mut summary = Vec::new();
    let mut pass = true;
    for &d in &c.dims.0 {
        let mut cfg = SuiteConfig::standard(d, c.seed, a.members)?;
        cfg.lambdas = lambdas_or_default(c, d)?;
        cfg.deltas = vec![];
        cfg.quad = Quadrature::preset(c.quad.into(), d);
        cfg.twisted = a.twisted;
        let rep = resolvent::run_suite(&cfg)?;
        let checked = rep.checked_identities().count();
        let failed = rep.checked_identities().filter(|r| !r.holds).count();
        let worst = rep.worst_identity().map_or(0.0, |r| r.residual);
        summary.push(format!("d={d} identities={checked} failures={failed} worst_residual={worst:.3e}"));
        pass &= rep.all_identities_hold();
        out.push(identities_json(d, &rep.identities));
    }
    let mut cfg = common_config(c);
    cfg["members"] = json!(a.members);
    cfg["twisted"] = json!(a.twisted);
    let mut csv = String::from("d,id,member,lambda,lhs,rhs,residual,holds\n");
    for doc in &out {
        for r in doc["identities"].as_array().into_iter().flatten() {
            csv.push_str(&format!(
                "{},{},{},{}{:+}i,{},{},{},{}\n",
                doc["d"], r["id"].as_str().unwrap_or(""), r["member"].as_str().unwrap_or(""),
                r["lambda"]["l1"], r["lambda"]["l2"].as_f64().unwrap_or(0.0), r["lhs"], r["rhs"], r["residual"], r["holds"]
            ));
        }
    }
    let mut w = Writer::new(c, "identities")?;
    w.csv("identities.csv", csv)?;
    w.json("identities.json", cfg, out)?;
    Ok(Outcome { pass, files: w.files, summary })
}

fn run_potentials(a: &PotentialArgs) -> Result<Outcome, RunError> {
    let c = &a.common;
    require_d2(&c.dims)?;
    let radii: Vec<f64> = (1..=40).map(|k| 0.1 * k as f64).collect();
    let t_levels = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut out = Vec::new();
    let mut summary = Vec::new();
    for &d in &c.dims.0 {
        let q = Quadrature::preset(c.quad.into(), d);
        let family: Vec<_> = builtin_family(d, c.seed).into_iter().take(a.family).collect();
        for (k, v) in a.potential.iter().enumerate() {
            let fam = (!family.is_empty()).then_some((family.as_slice(), &q));
            let bounds = potentials::potential_bounds(d, v, fam)?;
            let v1 = potentials::check_thm_v1(d, &bounds.b)?;
            let v2 = potentials::check_thm_v2(d, &bounds.b1, &bounds.b2, &bounds.b3)?;
            let rep = potentials::radial_repulsivity_profile(v, &radii, &t_levels, q.eps_axis);
            let nonnegative = resolvent::check_nonnegative(v, d).is_ok();
            summary.push(format!(
                "d={d} V{k}: b={:.6} positive-potential hypothesis={} (certified={}), real/complex hypothesis={} (certified={}), repulsive={}",
                v1.b, v1.hypothesis_met, v1.certifying, v2.hypothesis_met, v2.certifying, rep.repulsive
            ));
            out.push(json!({
                "d": d,
                "name": format!("V{k}"),
                "potential": v,
                "nonnegative": nonnegative,
                "bounds": bounds,
                "positive_potential": v1,
                "general": v2,
                "repulsivity": {
                    "repulsive": rep.repulsive,
                    "positive_count": rep.positive_count,
                    "negative_count": rep.negative_count,
                    "max_positive_part": rep.max_positive_part,
                    "sign_changes": rep.sign_changes,
                },
            }));
        }
    }
    let mut cfg = common_config(c);
    cfg["potentials"] = json!(a.potential);
    cfg["family"] = json!(a.family);
    let mut w = Writer::new(c, "potential-check")?;
    w.json("potentials.json", cfg, out)?;
    Ok(Outcome { pass: true, files: w.files, summary })
}

/// Parses, runs and reports; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(o) => {
            for line in &o.summary {
                println!("{line}");
            }
            for f in &o.files {
                eprintln!("wrote {}", f.display());
            }
            if !o.pass {
                eprintln!("FAIL: at least one verdict failed");
            }
            o.code()
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
