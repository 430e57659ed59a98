//! The randomized coordinate subgradient iteration and its full-subgradient
//! baseline.
//!
//! Each iteration samples one block uniformly, computes the block subgradient
//! through the problem oracle, and updates only that block:
//! `x_I <- x_I - alpha_k r_I`. The baseline is the same recursion with a
//! single full-width block; it draws from the index stream exactly like the
//! one-block randomized run, so the two are bit-identical under equal seeds.
//!
//! Weighted and plain running averages are maintained lazily per coordinate
//! (settled whenever a coordinate is touched), which keeps both memory and
//! amortized per-iteration cost proportional to the block size instead of
//! the full dimension.

use crate::error::{Error, Result};
use crate::oracle::CompositeOracle;
use crate::partition::BlockPartition;
use crate::rng::RngState;
use crate::schedule::StepSchedule;
use crate::vector::{norm2, Vector};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub schedule: StepSchedule,
    pub total_iterations: usize,
    pub seed: u64,
    /// Record a trace row every this many iterations (the final iteration is
    /// always recorded).
    pub record_every: usize,
    /// Iterations per epoch for reporting: `N` for the randomized method,
    /// `1` for the full-subgradient baseline.
    pub epoch_size: usize,
    /// When set, snapshot the iterate every this many *records* (for
    /// post-hoc envelope probing). The first record is always snapshotted.
    pub probe_every_records: Option<usize>,
    /// Also record the objective at the running weighted average (used by
    /// the rate-envelope checks; costs one full objective per record).
    pub record_average_objective: bool,
}

impl SolverConfig {
    pub fn new(schedule: StepSchedule, total_iterations: usize, seed: u64) -> Self {
        Self {
            schedule,
            total_iterations,
            seed,
            record_every: 1,
            epoch_size: 1,
            probe_every_records: None,
            record_average_objective: false,
        }
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn with_epoch_size(mut self, epoch: usize) -> Self {
        self.epoch_size = epoch;
        self
    }

    pub fn with_probe_every_records(mut self, every: usize) -> Self {
        self.probe_every_records = Some(every);
        self
    }

    pub fn with_average_objective(mut self) -> Self {
        self.record_average_objective = true;
        self
    }

    fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if self.record_every == 0 || self.epoch_size == 0 {
            return Err(Error::InvalidConfig("record_every and epoch_size must be >= 1".into()));
        }
        if self.probe_every_records == Some(0) {
            return Err(Error::InvalidConfig("probe_every_records must be >= 1".into()));
        }
        if let StepSchedule::FixedHorizon { horizon, .. } = self.schedule {
            if horizon != self.total_iterations {
                return Err(Error::InvalidConfig(format!(
                    "fixed-horizon schedule (T = {horizon}) must match total_iterations ({})",
                    self.total_iterations
                )));
            }
        }
        Ok(())
    }
}

/// One recorded iteration. `objective` is evaluated at the pre-update
/// iterate `x^k`; `step_norm` is exactly `alpha_k * ||r_I^k||`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub block: usize,
    pub alpha: f64,
    pub objective: f64,
    pub step_norm: f64,
    /// Objective at the running weighted average, when requested.
    pub avg_objective: Option<f64>,
    /// Filled by diagnostics after the run; the solver leaves these empty.
    pub envelope_grad_norm: Option<f64>,
    pub envelope_gap: Option<f64>,
}

/// Iterate snapshot taken at a record point, for post-hoc diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSnapshot {
    pub k: usize,
    pub x: Vector,
}

#[derive(Debug, Clone)]
pub struct SolverTrace {
    pub records: Vec<IterationRecord>,
    pub probes: Vec<ProbeSnapshot>,
    pub final_x: Vector,
    /// Objective at `final_x` computed from the cached residual.
    pub final_objective: f64,
    /// `sum_j alpha_j x^j / sum_j alpha_j` over the performed iterations.
    pub weighted_average: Vector,
    /// `(1/T) sum_j x^j` over the performed iterations.
    pub plain_average: Vector,
    pub wall_time_secs: f64,
    /// Analytic per-iteration workspace: the outer-subgradient buffer plus
    /// the block product (`8 (n + max d_i)` for the randomized method,
    /// `8 (n + d)` for the baseline).
    pub workspace_bytes_per_iter: usize,
}

/// Returns the weighted-average iterate; errors when no iterations ran.
pub fn weighted_average_iterate(trace: &SolverTrace) -> Result<&Vector> {
    if trace.records.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(&trace.weighted_average)
}

/// Returns the plain-average iterate; errors when no iterations ran.
pub fn plain_average_iterate(trace: &SolverTrace) -> Result<&Vector> {
    if trace.records.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(&trace.plain_average)
}

/// Lazily settled running average: a coordinate accumulates
/// `value * (elapsed weight)` only when touched or snapshotted.
struct RunningAverage {
    sums: Vec<f64>,
    last_cum: Vec<f64>,
    cum_weight: f64,
}

impl RunningAverage {
    fn new(dim: usize) -> Self {
        Self { sums: vec![0.0; dim], last_cum: vec![0.0; dim], cum_weight: 0.0 }
    }

    fn add_weight(&mut self, w: f64) {
        self.cum_weight += w;
    }

    /// Flushes the pending contribution of coordinate `idx`, which held
    /// `value` since its last settle.
    fn settle(&mut self, idx: usize, value: f64) {
        self.sums[idx] += value * (self.cum_weight - self.last_cum[idx]);
        self.last_cum[idx] = self.cum_weight;
    }

    /// Current average given the live coordinate values; `x` itself when no
    /// weight has accumulated (the zero-iteration convention).
    fn snapshot(&self, x: &[f64]) -> Vec<f64> {
        if self.cum_weight == 0.0 {
            return x.to_vec();
        }
        self.sums
            .iter()
            .zip(&self.last_cum)
            .zip(x)
            .map(|((&s, &last), &xv)| (s + xv * (self.cum_weight - last)) / self.cum_weight)
            .collect()
    }
}

/// Runs the randomized coordinate subgradient method.
pub fn rcs_run<P: CompositeOracle + ?Sized>(
    problem: &P,
    partition: &BlockPartition,
    config: &SolverConfig,
    x0: Vector,
) -> Result<SolverTrace> {
    let workspace = 8 * (problem.num_residuals() + partition.max_block_len());
    run_loop(problem, partition, config, x0, workspace)
}

/// Runs the full-subgradient baseline: every iteration computes the complete
/// subgradient and updates all coordinates. Equivalent to the randomized
/// method with a single block, including the per-iteration index draw, so
/// traces coincide bitwise for equal seeds.
pub fn subgrad_run<P: CompositeOracle + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    x0: Vector,
) -> Result<SolverTrace> {
    let partition = BlockPartition::single(problem.dim());
    let workspace = 8 * (problem.num_residuals() + problem.dim());
    run_loop(problem, &partition, config, x0, workspace)
}

fn run_loop<P: CompositeOracle + ?Sized>(
    problem: &P,
    partition: &BlockPartition,
    config: &SolverConfig,
    x0: Vector,
    workspace_bytes_per_iter: usize,
) -> Result<SolverTrace> {
    config.validate()?;
    if x0.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: x0.len() });
    }
    if partition.dim() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: partition.dim() });
    }

    let start = Instant::now();
    let dim = problem.dim();
    let blocks = partition.num_blocks();
    let mut rng = RngState::new(config.seed);
    let mut state = problem.init_state(x0);
    let mut weighted = RunningAverage::new(dim);
    let mut plain = RunningAverage::new(dim);
    let mut records = Vec::new();
    let mut probes = Vec::new();
    let mut recorded = 0usize;
    // Cheap objectives come from the cached residual; a from-scratch
    // recomputation every `record_every * 100` iterations guards drift.
    let full_stride = config.record_every.saturating_mul(100);

    for k in 0..config.total_iterations {
        let alpha = config.schedule.step(k);
        weighted.add_weight(alpha);
        plain.add_weight(1.0);

        let block = rng.uniform_index(blocks);
        let range = partition.range(block);
        let zeta = problem.outer_subgradient(&state);
        let r = problem.block_jacobian_transpose_apply(&state, range.clone(), &zeta);
        let step_norm = alpha * norm2(&r);

        if k % config.record_every == 0 || k + 1 == config.total_iterations {
            let objective = if k.is_multiple_of(full_stride) {
                problem.objective(state.x.as_slice())
            } else {
                problem.objective_from_state(&state)
            };
            if !objective.is_finite() {
                return Err(Error::Diverged { iteration: k, context: "objective" });
            }
            let avg_objective = if config.record_average_objective {
                Some(problem.objective(&weighted.snapshot(state.x.as_slice())))
            } else {
                None
            };
            if let Some(stride) = config.probe_every_records {
                if recorded.is_multiple_of(stride) {
                    probes.push(ProbeSnapshot { k, x: state.x.clone() });
                }
            }
            records.push(IterationRecord {
                k,
                block,
                alpha,
                objective,
                step_norm,
                avg_objective,
                envelope_grad_norm: None,
                envelope_gap: None,
            });
            recorded += 1;
        }

        let x = state.x.as_slice();
        let mut new_block = Vec::with_capacity(range.len());
        let mut finite = true;
        for (local, j) in range.clone().enumerate() {
            let v = x[j] - alpha * r[local];
            finite &= v.is_finite();
            new_block.push(v);
        }
        if !finite {
            return Err(Error::Diverged { iteration: k, context: "iterate update" });
        }
        for j in range.clone() {
            weighted.settle(j, x[j]);
            plain.settle(j, x[j]);
        }
        problem.state_update(&mut state, range, &new_block);
    }

    let weighted_average = Vector::new(weighted.snapshot(state.x.as_slice()))
        .map_err(|_| Error::NonFinite { context: "weighted average" })?;
    let plain_average = Vector::new(plain.snapshot(state.x.as_slice()))
        .map_err(|_| Error::NonFinite { context: "plain average" })?;
    let final_objective = problem.objective_from_state(&state);

    Ok(SolverTrace {
        records,
        probes,
        final_x: state.x,
        final_objective,
        weighted_average,
        plain_average,
        wall_time_secs: start.elapsed().as_secs_f64(),
        workspace_bytes_per_iter,
    })
}
