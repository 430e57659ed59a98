//! `rcs run`: execute one solver run (or a parallel seed sweep), emitting
//! the trace CSV and a summary JSON.

use crate::commands::reference::LossFlag;
use crate::config::{resolve_run, ExperimentConfig, Method, RunPlan};
use crate::csvout;
use crate::points;
use crate::problem::{load_problem, Family, LoadedProblem};
use anyhow::{bail, Context, Result};
use clap::Args;
use rcs_core::{
    envelope_gradient_norm, rcs_run, subgrad_run, BlockPartition, MoreauConfig,
    ReferenceSolution, SolverConfig, SolverTrace, StepSchedule, Vector,
};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<PathBuf>,
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
    /// rcs or subgrad.
    #[arg(long)]
    pub method: Option<String>,
    /// Block count for the randomized method (defaults to the dimension).
    #[arg(long)]
    pub blocks: Option<usize>,
    /// sqrt_log, quadratic_growth, or fixed_horizon.
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub kappa3: Option<f64>,
    /// Optional step cap for the fixed-horizon schedule.
    #[arg(long)]
    pub cap: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Inclusive seed range "a..b" run in parallel (capped by RCS_THREADS).
    #[arg(long, conflicts_with = "seed")]
    pub seeds: Option<String>,
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Snapshot the iterate every this many records for envelope probing.
    #[arg(long)]
    pub probe_every: Option<usize>,
    /// Moreau parameter; enables envelope-gradient columns at probe points.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Reference JSON from `rcs reference`; enables the gap column.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Write probe snapshots to a points file for `rcs diagnose`.
    #[arg(long)]
    pub save_probes: Option<PathBuf>,
    /// Initial point: zeros (default) or spectral (phase retrieval only).
    #[arg(long, default_value = "zeros")]
    pub init: String,
}

impl RunArgs {
    fn as_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            data: self.data.clone(),
            family: self.family,
            loss: self.loss.map(LossFlag::to_mest),
            p1: self.p1,
            p2: self.p2,
            svm_p: self.svm_p,
            method: self.method.clone(),
            blocks: self.blocks,
            schedule: self.schedule.clone(),
            delta: self.delta,
            kappa3: self.kappa3,
            cap: self.cap,
            epochs: self.epochs,
            seed: self.seed,
            record_every: self.record_every,
            probe_every: self.probe_every,
            lambda: self.lambda,
            reference: self.reference.clone(),
            trace: self.trace.clone(),
            summary: self.summary.clone(),
            save_probes: self.save_probes.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct FStarInfo {
    value: f64,
    provenance: rcs_core::ReferenceProvenance,
}

#[derive(Debug, Serialize)]
struct RunSummary {
    family: String,
    method: String,
    n: usize,
    d: usize,
    blocks: usize,
    schedule: StepSchedule,
    epochs: usize,
    iterations: usize,
    seed: u64,
    final_f: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_gap: Option<f64>,
    /// Distance to the planted signal, up to global sign for phase
    /// retrieval; present for synthetic datasets.
    #[serde(skip_serializing_if = "Option::is_none")]
    signal_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f_star: Option<FStarInfo>,
    wall_time_secs: f64,
    workspace_bytes_per_iter: usize,
    records: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_path: Option<String>,
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    seeds: Vec<RunSummary>,
    best_final_f: f64,
    mean_final_f: f64,
}

pub fn run(args: RunArgs) -> Result<()> {
    let flags = args.as_config();
    let cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?.merged_with(flags),
        None => flags,
    };
    let data_path = cfg.data.clone().context("--data is required")?;
    let problem = load_problem(&data_path, cfg.family, &cfg.loss_spec())?;
    let plan = resolve_run(&cfg, problem.d)?;
    let reference: Option<ReferenceSolution> = match &cfg.reference {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading reference {}", path.display()))?;
            Some(serde_json::from_str(&text)?)
        }
        None => None,
    };

    match &args.seeds {
        None => {
            let summary = execute_single(&args, &cfg, &problem, &plan, reference.as_ref())?;
            if let Some(path) = &cfg.summary {
                std::fs::write(path, serde_json::to_string_pretty(&summary)?)?;
            }
            eprintln!("final f = {:.6e}", summary.final_f);
        }
        Some(range) => {
            let (lo, hi) = parse_seed_range(range)?;
            let seeds: Vec<u64> = (lo..=hi).collect();
            let threads = sweep_threads();
            let mut summaries: Vec<Option<RunSummary>> = Vec::new();
            summaries.resize_with(seeds.len(), || None);
            // Independent solver runs over shared read-only problem data,
            // merged by this thread afterwards.
            std::thread::scope(|scope| -> Result<()> {
                for chunk in seeds.chunks(threads.max(1)) {
                    let mut handles = Vec::new();
                    for &seed in chunk {
                        let args = &args;
                        let cfg = &cfg;
                        let problem = &problem;
                        let plan = RunPlan { seed, ..clone_plan(&plan) };
                        let reference = reference.as_ref();
                        handles.push((seed, scope.spawn(move || {
                            execute_single(args, cfg, problem, &plan, reference)
                        })));
                    }
                    for (seed, handle) in handles {
                        let summary = handle.join().expect("sweep thread panicked")?;
                        let idx = (seed - lo) as usize;
                        summaries[idx] = Some(summary);
                    }
                }
                Ok(())
            })?;
            let summaries: Vec<RunSummary> = summaries.into_iter().flatten().collect();
            let best =
                summaries.iter().map(|s| s.final_f).fold(f64::INFINITY, f64::min);
            let mean =
                summaries.iter().map(|s| s.final_f).sum::<f64>() / summaries.len() as f64;
            eprintln!("sweep over {} seeds: best {best:.6e}, mean {mean:.6e}", summaries.len());
            if let Some(path) = &cfg.summary {
                let sweep = SweepSummary { seeds: summaries, best_final_f: best, mean_final_f: mean };
                std::fs::write(path, serde_json::to_string_pretty(&sweep)?)?;
            }
        }
    }
    Ok(())
}

fn clone_plan(plan: &RunPlan) -> RunPlan {
    RunPlan {
        method: plan.method,
        blocks: plan.blocks,
        schedule: plan.schedule.clone(),
        epochs: plan.epochs,
        total_iterations: plan.total_iterations,
        seed: plan.seed,
        record_every: plan.record_every,
        epoch_size: plan.epoch_size,
    }
}

fn execute_single(
    args: &RunArgs,
    cfg: &ExperimentConfig,
    problem: &LoadedProblem,
    plan: &RunPlan,
    reference: Option<&ReferenceSolution>,
) -> Result<RunSummary> {
    let mut solver_cfg = SolverConfig::new(plan.schedule.clone(), plan.total_iterations, plan.seed)
        .with_record_every(plan.record_every)
        .with_epoch_size(plan.epoch_size);
    let probing = cfg.probe_every.is_some() || cfg.lambda.is_some() || cfg.save_probes.is_some();
    if probing {
        solver_cfg = solver_cfg.with_probe_every_records(cfg.probe_every.unwrap_or(1));
    }

    let x0 = match args.init.as_str() {
        "zeros" => Vector::zeros(problem.d),
        "spectral" => match &problem.phase {
            Some(pr) => pr.spectral_init(),
            None => bail!("--init spectral is only available for phase retrieval"),
        },
        other => bail!("unknown init {other:?}"),
    };

    let trace: SolverTrace = match plan.method {
        Method::Rcs => {
            let partition = BlockPartition::new(problem.d, plan.blocks)?;
            rcs_run(problem.oracle.as_ref(), &partition, &solver_cfg, x0)?
        }
        Method::Subgrad => subgrad_run(problem.oracle.as_ref(), &solver_cfg, x0)?,
    };

    // Envelope probes along the trace when a Moreau parameter is supplied.
    let mut envelope: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    if let Some(lambda) = cfg.lambda {
        let rho = problem.oracle.weak_convexity_modulus().rho;
        let mcfg = MoreauConfig::new(lambda, rho).with_tolerance(1e-8);
        mcfg.validate()?;
        for probe in &trace.probes {
            let (norm, gap) =
                envelope_gradient_norm(problem.oracle.as_ref(), probe.x.as_slice(), &mcfg)?;
            envelope.insert(probe.k, (norm, gap));
        }
    }

    let trace_path = seeded_path(cfg.trace.as_deref(), plan.seed, args.seeds.is_some());
    if let Some(path) = &trace_path {
        csvout::write_trace(
            path,
            &trace,
            plan.epoch_size,
            reference.map(|r| r.f_star),
            &envelope,
        )?;
    }
    if let Some(base) = cfg.save_probes.as_deref() {
        let path = seeded_path(Some(base), plan.seed, args.seeds.is_some()).unwrap();
        points::write_points(&path, &trace.probes)?;
    }

    let signal_distance = problem.x_star.as_ref().map(|xs| {
        let plus = rcs_core::vector::dist2(trace.final_x.as_slice(), xs.as_slice());
        if problem.family == Family::Pr {
            let minus: f64 = trace
                .final_x
                .as_slice()
                .iter()
                .zip(xs.as_slice())
                .map(|(a, b)| (a + b) * (a + b))
                .sum::<f64>()
                .sqrt();
            plus.min(minus)
        } else {
            plus
        }
    });

    Ok(RunSummary {
        family: problem.family.name().to_string(),
        method: plan.method.name().to_string(),
        n: problem.n,
        d: problem.d,
        blocks: plan.blocks,
        schedule: plan.schedule.clone(),
        epochs: plan.epochs,
        iterations: plan.total_iterations,
        seed: plan.seed,
        final_f: trace.final_objective,
        final_gap: reference.map(|r| trace.final_objective - r.f_star),
        signal_distance,
        f_star: reference.map(|r| FStarInfo { value: r.f_star, provenance: r.provenance.clone() }),
        wall_time_secs: trace.wall_time_secs,
        workspace_bytes_per_iter: trace.workspace_bytes_per_iter,
        records: trace.records.len(),
        trace_path: trace_path.map(|p| p.display().to_string()),
    })
}

/// Per-seed output naming for sweeps: `out.csv` becomes `out_seed3.csv`.
fn seeded_path(base: Option<&Path>, seed: u64, sweeping: bool) -> Option<PathBuf> {
    let base = base?;
    if !sweeping {
        return Some(base.to_path_buf());
    }
    let stem = base.file_stem().unwrap_or_default().to_string_lossy();
    let ext = base.extension().map(|e| e.to_string_lossy().into_owned());
    let name = match ext {
        Some(ext) => format!("{stem}_seed{seed}.{ext}"),
        None => format!("{stem}_seed{seed}"),
    };
    Some(base.with_file_name(name))
}

fn parse_seed_range(range: &str) -> Result<(u64, u64)> {
    let (lo, hi) = range
        .split_once("..")
        .with_context(|| format!("expected a..b, got {range:?}"))?;
    let lo: u64 = lo.trim().parse()?;
    let hi: u64 = hi.trim().parse()?;
    if hi < lo {
        bail!("empty seed range {range:?}");
    }
    Ok((lo, hi))
}

fn sweep_threads() -> usize {
    match std::env::var("RCS_THREADS") {
        Ok(v) => v.parse().unwrap_or(1).max(1),
        Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    }
}
