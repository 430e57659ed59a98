//! `rcs diagnose`: envelope-gradient norms along saved iterates, the
//! phase-retrieval critical-set bound, and subregularity ratios.

use crate::commands::reference::LossFlag;
use crate::points::read_points;
use crate::problem::{load_problem, Family, LossSpec};
use anyhow::{Context, Result};
use clap::Args;
use rcs_core::{
    critical_set_bound_pr, min_norm_subgradient_pr, prox_estimate, subregularity_probe,
    MoreauConfig, Vector,
};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_parser = Family::parse)]
    pub family: Option<Family>,
    #[arg(long, value_enum)]
    pub loss: Option<LossFlag>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub svm_p: Option<f64>,
    /// Points file from `rcs run --save-probes`.
    #[arg(long)]
    pub points: PathBuf,
    /// Reference points (near-critical, from long runs) for the
    /// subregularity ratios.
    #[arg(long)]
    pub refs: Option<PathBuf>,
    /// Moreau parameter; must satisfy lambda < 1/rho.
    #[arg(long)]
    pub lambda: f64,
    /// Inner prox budget per probe.
    #[arg(long, default_value_t = 5_000)]
    pub budget: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct PointDiagnostic {
    k: usize,
    iterate_norm: f64,
    envelope_value: f64,
    envelope_grad_norm: f64,
    certified_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_norm_subgradient: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SubregularityOut {
    kappa_hat: f64,
    ratios: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct DiagnoseReport {
    family: String,
    lambda: f64,
    rho: f64,
    points: Vec<PointDiagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_set_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_iterates_within_twice_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subregularity: Option<SubregularityOut>,
}

pub fn run(args: DiagnoseArgs) -> Result<()> {
    let spec = LossSpec {
        loss: args.loss.map(LossFlag::to_mest),
        p1: args.p1,
        p2: args.p2,
        svm_p: args.svm_p,
    };
    let problem = load_problem(&args.data, args.family, &spec)?;
    let rho = problem.oracle.weak_convexity_modulus().rho;
    let mcfg = MoreauConfig::new(args.lambda, rho)
        .with_budget(args.budget)
        .with_tolerance(1e-8);
    mcfg.validate()?;

    let probes = read_points(&args.points)?;
    let mut points = Vec::with_capacity(probes.len());
    for probe in &probes {
        let res = prox_estimate(problem.oracle.as_ref(), probe.x.as_slice(), &mcfg)?;
        let min_norm = problem
            .phase
            .as_ref()
            .map(|pr| min_norm_subgradient_pr(pr, probe.x.as_slice()));
        points.push(PointDiagnostic {
            k: probe.k,
            iterate_norm: probe.x.norm(),
            envelope_value: res.envelope_value,
            envelope_grad_norm: res.envelope_gradient.norm(),
            certified_gap: res.certified_gap,
            min_norm_subgradient: min_norm,
        });
    }

    let critical_set_bound = match &problem.phase {
        Some(pr) => Some(critical_set_bound_pr(pr)?),
        None => None,
    };
    let within = critical_set_bound
        .map(|b2| points.iter().all(|p| p.iterate_norm <= 2.0 * b2));

    let subregularity = match &args.refs {
        Some(path) => {
            let refs: Vec<Vector> = read_points(path)?.into_iter().map(|p| p.x).collect();
            let samples: Vec<Vector> = probes.iter().map(|p| p.x.clone()).collect();
            let (records, kappa_hat) = match &problem.phase {
                Some(pr) => subregularity_probe(&refs, &samples, |x| {
                    min_norm_subgradient_pr(pr, x)
                }),
                None => subregularity_probe(&refs, &samples, |x| {
                    envelope_gradient_norm_value(problem.oracle.as_ref(), x, &mcfg)
                }),
            };
            Some(SubregularityOut {
                kappa_hat,
                ratios: records.iter().map(|r| r.ratio).collect(),
            })
        }
        None => None,
    };

    let report = DiagnoseReport {
        family: problem.family.name().to_string(),
        lambda: args.lambda,
        rho,
        points,
        critical_set_bound,
        all_iterates_within_twice_bound: within,
        subregularity,
    };
    std::fs::write(&args.out, serde_json::to_string_pretty(&report)?)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("diagnostics -> {}", args.out.display());
    Ok(())
}

fn envelope_gradient_norm_value(
    oracle: &(dyn rcs_core::CompositeOracle + Send + Sync),
    x: &[f64],
    cfg: &MoreauConfig,
) -> f64 {
    rcs_core::envelope_gradient_norm(oracle, x, cfg).map(|(n, _)| n).unwrap_or(f64::NAN)
}
