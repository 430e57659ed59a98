//! `rcs reference`: estimate the reference optimum for gap reporting.

use crate::problem::{load_problem, Family, LossSpec, MestLoss};
use anyhow::{Context, Result};
use clap::Args;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct ReferenceArgs {
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
    /// Full-subgradient iterations per start.
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    /// Step constant of the diminishing schedule.
    #[arg(long)]
    pub delta: f64,
    /// Number of starts (zero first, then random).
    #[arg(long, default_value_t = 5)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    /// Quadratic growth constant; enables the refinement tail on convex
    /// problems.
    #[arg(long)]
    pub kappa3: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum LossFlag {
    L1,
    Mcp,
}

impl LossFlag {
    pub fn to_mest(self) -> MestLoss {
        match self {
            LossFlag::L1 => MestLoss::L1,
            LossFlag::Mcp => MestLoss::Mcp,
        }
    }
}

pub fn run(args: ReferenceArgs) -> Result<()> {
    let spec = LossSpec {
        loss: args.loss.map(LossFlag::to_mest),
        p1: args.p1,
        p2: args.p2,
        svm_p: args.svm_p,
    };
    let problem = load_problem(&args.data, args.family, &spec)?;
    let reference = rcs_core::compute_reference(
        problem.oracle.as_ref(),
        args.budget,
        args.delta,
        args.base_seed,
        args.seeds,
        args.kappa3,
    )?;
    let json = serde_json::to_string_pretty(&reference)?;
    std::fs::write(&args.out, json)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "reference f* = {:.6e} ({}) -> {}",
        reference.f_star,
        reference.provenance.method,
        args.out.display()
    );
    Ok(())
}
