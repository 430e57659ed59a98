//! Experiment configuration: JSON file merged with command-line flags
//! (flags win).

use crate::problem::{Family, LossSpec, MestLoss};
use anyhow::{bail, Context, Result};
use rcs_core::StepSchedule;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: Option<PathBuf>,
    pub family: Option<Family>,
    pub loss: Option<MestLoss>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub svm_p: Option<f64>,
    /// "rcs" or "subgrad".
    pub method: Option<String>,
    pub blocks: Option<usize>,
    /// "sqrt_log", "quadratic_growth", or "fixed_horizon".
    pub schedule: Option<String>,
    pub delta: Option<f64>,
    pub kappa3: Option<f64>,
    pub cap: Option<f64>,
    pub epochs: Option<usize>,
    pub seed: Option<u64>,
    pub record_every: Option<usize>,
    pub probe_every: Option<usize>,
    pub lambda: Option<f64>,
    pub reference: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub save_probes: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Field-wise overlay: any value set in `flags` replaces the file value.
    pub fn merged_with(mut self, flags: ExperimentConfig) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })*
            };
        }
        take!(
            data, family, loss, p1, p2, svm_p, method, blocks, schedule, delta, kappa3, cap,
            epochs, seed, record_every, probe_every, lambda, reference, trace, summary,
            save_probes
        );
        self
    }

    pub fn loss_spec(&self) -> LossSpec {
        LossSpec { loss: self.loss, p1: self.p1, p2: self.p2, svm_p: self.svm_p }
    }
}

/// Fully validated run plan for one solver invocation.
pub struct RunPlan {
    pub method: Method,
    pub blocks: usize,
    pub schedule: StepSchedule,
    pub epochs: usize,
    pub total_iterations: usize,
    pub seed: u64,
    pub record_every: usize,
    pub epoch_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rcs,
    Subgrad,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Rcs => "rcs",
            Method::Subgrad => "subgrad",
        }
    }
}

/// Resolves the solver portion of a config against a problem dimension.
/// One epoch is `blocks` iterations for the randomized method and one
/// iteration for the baseline.
pub fn resolve_run(cfg: &ExperimentConfig, dim: usize) -> Result<RunPlan> {
    let method = match cfg.method.as_deref().unwrap_or("rcs") {
        "rcs" => Method::Rcs,
        "subgrad" => Method::Subgrad,
        other => bail!("unknown method {other:?} (expected rcs or subgrad)"),
    };
    let blocks = match method {
        Method::Rcs => {
            let blocks = cfg.blocks.unwrap_or(dim);
            if blocks == 0 || blocks > dim {
                bail!("blocks must be in 1..={dim}");
            }
            blocks
        }
        Method::Subgrad => 1,
    };
    let epochs = cfg.epochs.context("epochs is required")?;
    let epoch_size = match method {
        Method::Rcs => blocks,
        Method::Subgrad => 1,
    };
    let total_iterations = epochs * epoch_size;
    let schedule = match cfg.schedule.as_deref().unwrap_or("sqrt_log") {
        "sqrt_log" => StepSchedule::SqrtLog {
            delta: cfg.delta.context("--delta is required for the sqrt_log schedule")?,
        },
        "quadratic_growth" => StepSchedule::QuadraticGrowth {
            blocks,
            kappa3: cfg.kappa3.context("--kappa3 is required for the quadratic_growth schedule")?,
        },
        "fixed_horizon" => StepSchedule::FixedHorizon {
            delta: cfg.delta.context("--delta is required for the fixed_horizon schedule")?,
            horizon: total_iterations,
            cap: cfg.cap,
        },
        other => bail!("unknown schedule {other:?}"),
    };
    schedule.validate()?;
    Ok(RunPlan {
        method,
        blocks,
        schedule,
        epochs,
        total_iterations,
        seed: cfg.seed.unwrap_or(0),
        record_every: cfg.record_every.unwrap_or(epoch_size.max(1)),
        epoch_size,
    })
}
