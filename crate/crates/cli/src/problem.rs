//! Dataset loading and problem construction shared by the subcommands.

use anyhow::{bail, Context, Result};
use rcs_core::{data, CompositeOracle, LinearSvm, Loss, MEstimator, PhaseRetrieval};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Mestimator,
    Svm,
    Pr,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "mestimator" => Ok(Family::Mestimator),
            "svm" => Ok(Family::Svm),
            "pr" => Ok(Family::Pr),
            other => bail!("unknown family {other:?} (expected mestimator, svm, or pr)"),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Mestimator => "mestimator",
            Family::Svm => "svm",
            Family::Pr => "pr",
        }
    }
}

/// Loss parameters from flags or config file.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct LossSpec {
    /// "l1" (default) or "mcp"; only meaningful for the regression family.
    pub loss: Option<MestLoss>,
    /// MCP width.
    pub p1: Option<f64>,
    /// `l1` penalty weight.
    pub p2: Option<f64>,
    /// SVM weight-decay parameter.
    pub svm_p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MestLoss {
    L1,
    Mcp,
}

pub struct LoadedProblem {
    pub oracle: Box<dyn CompositeOracle + Send + Sync>,
    pub family: Family,
    pub n: usize,
    pub d: usize,
    /// Present for synthetic datasets.
    pub x_star: Option<rcs_core::Vector>,
    /// Reference to the concrete type for the phase-retrieval diagnostics.
    pub phase: Option<PhaseRetrieval>,
}

/// Loads a dataset (binary container with sidecar, or sparse libsvm text)
/// and builds the requested problem. `family` falls back to the sidecar.
pub fn load_problem(
    path: &Path,
    family: Option<Family>,
    spec: &LossSpec,
) -> Result<LoadedProblem> {
    let meta = data::read_meta(path).ok();
    let family = match family.or_else(|| meta.as_ref().and_then(|m| Family::parse(&m.family).ok()))
    {
        Some(f) => f,
        None => bail!("family not given and no dataset sidecar found; pass --family"),
    };

    let (matrix, measurements, x_star) = if data::read_meta(path).is_ok() || is_container(path) {
        let ds = data::read_dataset(path)
            .with_context(|| format!("reading dataset container {}", path.display()))?;
        (ds.matrix, ds.measurements, Some(ds.x_star))
    } else {
        let (matrix, labels) = data::read_libsvm(path)
            .with_context(|| format!("reading libsvm file {}", path.display()))?;
        (matrix, labels, None)
    };

    let n = matrix.nrows();
    let d = matrix.ncols();
    let oracle: Box<dyn CompositeOracle + Send + Sync>;
    let mut phase = None;
    match family {
        Family::Mestimator => {
            let p2 = spec.p2.unwrap_or(0.01);
            let loss = match spec.loss.unwrap_or(MestLoss::L1) {
                MestLoss::L1 => Loss::L1,
                MestLoss::Mcp => Loss::Mcp {
                    p1: spec.p1.context("--p1 is required for the MCP loss")?,
                },
            };
            oracle = Box::new(MEstimator::new(matrix, measurements, p2, loss)?);
        }
        Family::Svm => {
            let p = spec.svm_p.unwrap_or(0.01);
            oracle = Box::new(LinearSvm::new(matrix, &measurements, p)?);
        }
        Family::Pr => {
            let problem = PhaseRetrieval::new(matrix.clone(), measurements.clone())?;
            phase = Some(PhaseRetrieval::new(matrix, measurements)?);
            oracle = Box::new(problem);
        }
    }
    Ok(LoadedProblem { oracle, family, n, d, x_star, phase })
}

fn is_container(path: &Path) -> bool {
    std::fs::File::open(path)
        .and_then(|mut f| {
            use std::io::Read;
            let mut magic = [0u8; 4];
            f.read_exact(&mut magic)?;
            Ok(magic == *b"RCSD")
        })
        .unwrap_or(false)
}
