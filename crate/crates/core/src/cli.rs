//! Command-line front end.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use thiserror::Error;

use crate::algebra::{parse_poly, projective_transform, AlgebraError, BiPoly, GaussRat, ProjMatrix};
use crate::hamiltonian::{default_loops, monodromy_group, BaseLoop, GroupReport, HamiltonianError, SystemId};
use crate::roots::{CxApprox, TrackOptions};
use crate::zvk::{
    braid_monodromy_with, critical_values, genericity_fix, pi1, plan_loops, Pi1Config, ZvkError, DEFAULT_TIETZE_BUDGET,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("pipeline error: {0}")]
    Pipeline(String),
    #[error("certification failure: {0}")]
    Certification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Pipeline(_) => 3,
            CliError::Certification(_) => 4,
        }
    }
}

impl From<HamiltonianError> for CliError {
    fn from(e: HamiltonianError) -> Self {
        match e {
            HamiltonianError::Residual(_)
            | HamiltonianError::StepUnderflow { .. }
            | HamiltonianError::Quadrature(_) => CliError::Certification(e.to_string()),
            HamiltonianError::OnSingularSet { .. } | HamiltonianError::OpenLoop => CliError::Input(e.to_string()),
            _ => CliError::Pipeline(e.to_string()),
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn pipeline_err(e: impl std::fmt::Display) -> CliError {
    CliError::Pipeline(e.to_string())
}

/// Errors of the genericity stage are the caller's fault.
fn genericity_err(e: ZvkError) -> CliError {
    match e {
        ZvkError::Algebra(_) | ZvkError::NotSquarefree | ZvkError::Degenerate(_) | ZvkError::GenericityFailed(_) => {
            input_err(e)
        }
        _ => pipeline_err(e),
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "monodromy",
    version,
    about = "Braid monodromy, Zariski-van Kampen presentations and Hamiltonian monodromy"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Working precision in bits (at least 53).
    #[arg(long, global = true, default_value_t = 53)]
    pub precision: u32,
    /// Seed for the genericity shear.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximal number of Tietze passes.
    #[arg(long, global = true, default_value_t = DEFAULT_TIETZE_BUDGET)]
    pub budget: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include sampled root trajectories (JSON only).
    #[arg(long = "plot-data", global = true)]
    pub plot_data: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { precision: 53, seed: 0, budget: DEFAULT_TIETZE_BUDGET, json: false, plot_data: false }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact discriminant and certified critical values of the projection to x.
    Discriminant { poly: String },
    /// Braid of each meridian around a critical value.
    Braid { poly: String },
    /// Presentation of the fundamental group of the complement.
    Pi1 { poly: String },
    /// Apply a projective change of coordinates.
    Transform {
        poly: String,
        /// `identity`, `swap-yz`, or nine comma separated entries, row by row.
        #[arg(long, default_value = "identity")]
        matrix: String,
        /// Dehomogenize in the transformed chart (`z = 1` becomes the old line at infinity).
        #[arg(long = "line-at-infinity")]
        line_at_infinity: bool,
    },
    /// Hamiltonian monodromy of `pendulum` or `kepler`.
    Monodromy {
        system: SystemId,
        /// `default`, `const`, a default loop label, or `circle:X,CRE,CIM,R`.
        /// May be repeated.
        #[arg(long = "loop")]
        loops: Vec<String>,
    },
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = &cli.config;
    if cfg.precision < 53 {
        return Err(CliError::Input(format!("precision must be at least 53 bits, got {}", cfg.precision)));
    }
    match &cli.command {
        Command::Discriminant { poly } => cmd_discriminant(poly, cfg),
        Command::Braid { poly } => cmd_braid(poly, cfg),
        Command::Pi1 { poly } => cmd_pi1(poly, cfg),
        Command::Transform { poly, matrix, line_at_infinity } => cmd_transform(poly, matrix, *line_at_infinity, cfg),
        Command::Monodromy { system, loops } => cmd_monodromy(*system, loops, cfg),
    }
}

fn parse(text: &str) -> Result<BiPoly, CliError> {
    parse_poly(text).map_err(input_err)
}

fn fmt_approx(c: &CxApprox) -> String {
    let z = c.z();
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    format!("{}{:+}i (+/- {:.1e})", re, im, c.err)
}

fn to_json(v: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(pipeline_err)
}

pub fn cmd_discriminant(text: &str, cfg: &RunConfig) -> Result<String, CliError> {
    let f = parse(text)?;
    let (curve, genericity) = genericity_fix(&f, cfg.seed).map_err(genericity_err)?;
    let cs = critical_values(&curve).map_err(genericity_err)?;
    if cfg.json {
        return to_json(&json!({
            "input": f.to_string(),
            "curve": curve.to_string(),
            "genericity": genericity,
            "discriminant": cs.discriminant.to_string(),
            "reduced": cs.source.to_string(),
            "critical_values": cs.points,
        }));
    }
    let mut out = String::new();
    if genericity.sheared {
        writeln!(out, "sheared curve: {}", curve).unwrap();
    }
    writeln!(out, "discriminant: {}", cs.discriminant).unwrap();
    writeln!(out, "squarefree part: {}", cs.source).unwrap();
    writeln!(out, "critical values ({}):", cs.len()).unwrap();
    for p in &cs.points {
        writeln!(out, "  {}", fmt_approx(p)).unwrap();
    }
    Ok(out)
}

pub fn cmd_braid(text: &str, cfg: &RunConfig) -> Result<String, CliError> {
    let f = parse(text)?;
    let (curve, genericity) = genericity_fix(&f, cfg.seed).map_err(genericity_err)?;
    let cs = critical_values(&curve).map_err(genericity_err)?;
    let plan = plan_loops(&cs);
    let (rep, traj) =
        braid_monodromy_with(&curve, &plan, &TrackOptions::with_precision(cfg.precision)).map_err(pipeline_err)?;
    if cfg.json {
        let mut v = json!({
            "input": f.to_string(),
            "curve": curve.to_string(),
            "genericity": genericity,
            "critical": cs,
            "plan": plan,
            "monodromy": rep,
        });
        if cfg.plot_data {
            v["trajectories"] = serde_json::to_value(&traj).map_err(pipeline_err)?;
        }
        return to_json(&v);
    }
    let mut out = String::new();
    if genericity.sheared {
        writeln!(out, "sheared curve: {}", curve).unwrap();
    }
    writeln!(out, "strands: {}", rep.strands).unwrap();
    writeln!(out, "basepoint: {}", fmt_approx(&plan.basepoint)).unwrap();
    for (k, (lp, b)) in plan.loops.iter().zip(&rep.braids).enumerate() {
        writeln!(out, "loop {} around {}: {}", k + 1, fmt_approx(&lp.center), b).unwrap();
    }
    Ok(out)
}

pub fn cmd_pi1(text: &str, cfg: &RunConfig) -> Result<String, CliError> {
    let f = parse(text)?;
    genericity_fix(&f, cfg.seed).map_err(genericity_err)?;
    let pc =
        Pi1Config { precision: cfg.precision, seed: cfg.seed, budget: cfg.budget, keep_trajectories: cfg.plot_data };
    let r = pi1(&f, &pc).map_err(pipeline_err)?;
    if cfg.json {
        return to_json(&r);
    }
    let mut out = String::new();
    if r.genericity.sheared {
        writeln!(out, "sheared curve: {}", r.curve).unwrap();
    }
    writeln!(out, "critical values: {}", r.critical.len()).unwrap();
    for (k, b) in r.monodromy.braids.iter().enumerate() {
        writeln!(out, "braid {}: {}", k + 1, b).unwrap();
    }
    writeln!(out, "presentation: {}", r.presentation).unwrap();
    writeln!(out, "simplified: {}", r.simplified).unwrap();
    writeln!(out, "abelianization: {}", r.abelianization).unwrap();
    Ok(out)
}

fn parse_matrix(spec: &str) -> Result<ProjMatrix, CliError> {
    match spec {
        "identity" => return Ok(ProjMatrix::identity()),
        "swap-yz" => return Ok(ProjMatrix::swap_yz()),
        _ => {}
    }
    let entries: Vec<GaussRat> = spec
        .split(',')
        .map(|s| {
            parse_poly(s.trim())
                .map_err(input_err)?
                .constant_value()
                .ok_or_else(|| CliError::Input(format!("matrix entry `{}` is not a constant", s.trim())))
        })
        .collect::<Result<_, _>>()?;
    if entries.len() != 9 {
        return Err(CliError::Input(format!("matrix needs 9 entries, got {}", entries.len())));
    }
    let mut it = entries.into_iter();
    let m: [[GaussRat; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| it.next().unwrap()));
    ProjMatrix::new(m).map_err(|e: AlgebraError| input_err(e))
}

pub fn cmd_transform(text: &str, matrix: &str, line_at_infinity: bool, cfg: &RunConfig) -> Result<String, CliError> {
    let f = parse(text)?;
    let m = parse_matrix(matrix)?;
    let g = projective_transform(&f, &m, line_at_infinity).map_err(input_err)?;
    if cfg.json {
        let rows: Vec<Vec<String>> = m.entries().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        return to_json(&json!({
            "input": f.to_string(),
            "matrix": rows,
            "line_at_infinity": line_at_infinity,
            "output": g.to_string(),
        }));
    }
    Ok(format!("{}\n", g))
}

fn parse_circle(spec: &str) -> Result<BaseLoop, CliError> {
    let nums: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Input(format!("bad number `{}`: {}", s.trim(), e))))
        .collect::<Result<_, _>>()?;
    let [x, cre, cim, r] = nums[..] else {
        return Err(CliError::Input(format!("circle needs X,CRE,CIM,R, got `{}`", spec)));
    };
    if r.is_nan() || r <= 0.0 || !r.is_finite() {
        return Err(CliError::Input(format!("radius must be positive, got {}", r)));
    }
    let center = Complex64::new(cre, cim);
    Ok(BaseLoop::meridian(&format!("circle:{}", spec), Complex64::new(x, 0.0), center, r, center - 2.0 * r))
}

fn resolve_loops(system: SystemId, specs: &[String]) -> Result<Vec<BaseLoop>, CliError> {
    let defaults = default_loops(system);
    if specs.is_empty() {
        return Ok(defaults);
    }
    let mut out = Vec::new();
    for s in specs {
        match s.as_str() {
            "default" => out.extend(defaults.iter().cloned()),
            "const" => {
                let d = &defaults[0];
                out.push(BaseLoop::constant("const", d.x, d.path.start()));
            }
            _ => {
                if let Some(rest) = s.strip_prefix("circle:") {
                    out.push(parse_circle(rest)?);
                } else if let Some(d) = defaults.iter().find(|d| d.label.eq_ignore_ascii_case(s)) {
                    out.push(d.clone());
                } else {
                    return Err(CliError::Input(format!("unknown loop `{}` for {}", s, system)));
                }
            }
        }
    }
    Ok(out)
}

fn fmt_matrix(rows: &[Vec<i64>]) -> String {
    let w = rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    rows.iter()
        .map(|r| format!("  [{}]", r.iter().map(|v| format!("{:>w$}", v, w = w)).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn cmd_monodromy(system: SystemId, loops: &[String], cfg: &RunConfig) -> Result<String, CliError> {
    let loops = resolve_loops(system, loops)?;
    let report: GroupReport = monodromy_group(system, &loops, cfg.precision)?;
    if cfg.json {
        return to_json(&report);
    }
    let mut out = String::new();
    writeln!(out, "system: {}", system).unwrap();
    for l in &report.loops {
        writeln!(out, "{}", l.loop_description).unwrap();
        writeln!(out, "{}", fmt_matrix(&l.matrix)).unwrap();
        let order = l.invariants.order.map_or("infinite".to_string(), |k| k.to_string());
        writeln!(
            out,
            "  det {}  trace {}  order {}  residual {:.1e}",
            l.invariants.det, l.invariants.trace, order, l.residual
        )
        .unwrap();
    }
    writeln!(out, "group: {}", report.group).unwrap();
    Ok(out)
}
