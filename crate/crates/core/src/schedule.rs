//! Step-size schedules.
//!
//! All schedules produce strictly positive, finite steps. The two diminishing
//! variants have divergent step sums with square-summable tails, which is the
//! condition the convex-regime guarantees rest on; the fixed-horizon variant
//! is the constant step used in the weakly convex regime.
//!
//! `log` always means the natural logarithm here; a different base would only
//! rescale the step constant.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `delta / (sqrt(k+1) * ln(k+2))`.
pub fn sqrt_log_step(k: usize, delta: f64) -> f64 {
    debug_assert!(delta > 0.0);
    let kf = k as f64;
    delta / ((kf + 1.0).sqrt() * (kf + 2.0).ln())
}

/// `N * kappa3 / (k+1)`, the schedule for the quadratic-growth regime.
pub fn quadratic_growth_step(k: usize, blocks: usize, kappa3: f64) -> f64 {
    debug_assert!(kappa3 > 0.0);
    blocks as f64 * kappa3 / (k as f64 + 1.0)
}

/// Constant step `delta / sqrt(T+1)` for a pre-determined horizon `T`,
/// optionally clamped from above by `cap`.
pub fn horizon_step(horizon: usize, delta: f64, cap: Option<f64>) -> Result<f64> {
    debug_assert!(horizon >= 1 && delta > 0.0);
    let base = delta / ((horizon as f64 + 1.0).sqrt());
    match cap {
        None => Ok(base),
        Some(c) if c > 0.0 => Ok(base.min(c)),
        Some(c) => Err(Error::InvalidCap(c)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum StepSchedule {
    /// Diminishing `delta / (sqrt(k+1) ln(k+2))`.
    SqrtLog { delta: f64 },
    /// `N kappa3 / (k+1)`; requires the quadratic growth constant.
    QuadraticGrowth { blocks: usize, kappa3: f64 },
    /// Constant `delta / sqrt(horizon+1)`, optionally capped. The cap comes
    /// from the weakly convex step restriction and is user-supplied because
    /// its constant is not computable from problem data; absent a cap the
    /// solver runs uncapped.
    FixedHorizon { delta: f64, horizon: usize, cap: Option<f64> },
}

impl StepSchedule {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepSchedule::SqrtLog { delta } => delta > 0.0,
            StepSchedule::QuadraticGrowth { blocks, kappa3 } => blocks >= 1 && kappa3 > 0.0,
            StepSchedule::FixedHorizon { delta, horizon, cap } => {
                if let Some(c) = cap {
                    if c <= 0.0 {
                        return Err(Error::InvalidCap(c));
                    }
                }
                delta > 0.0 && horizon >= 1
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("invalid schedule parameters: {self:?}")))
        }
    }

    pub fn step(&self, k: usize) -> f64 {
        match *self {
            StepSchedule::SqrtLog { delta } => sqrt_log_step(k, delta),
            StepSchedule::QuadraticGrowth { blocks, kappa3 } => {
                quadratic_growth_step(k, blocks, kappa3)
            }
            StepSchedule::FixedHorizon { delta, horizon, cap } => {
                horizon_step(horizon, delta, cap).expect("validated cap")
            }
        }
    }

    /// Whether the infinite step sum diverges analytically.
    pub fn step_sum_diverges(&self) -> bool {
        !matches!(self, StepSchedule::FixedHorizon { .. })
    }
}

/// Partial sums of the first `horizon` steps, plus the analytic divergence
/// flag for the infinite sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummabilityReport {
    pub sum_alpha: f64,
    pub sum_alpha_sq: f64,
    pub divergence_flag: bool,
}

pub fn validate_summability(schedule: &StepSchedule, horizon: usize) -> SummabilityReport {
    debug_assert!(horizon >= 1);
    let mut sum_alpha = 0.0;
    let mut sum_alpha_sq = 0.0;
    for k in 0..horizon {
        let a = schedule.step(k);
        sum_alpha += a;
        sum_alpha_sq += a * a;
    }
    SummabilityReport {
        sum_alpha,
        sum_alpha_sq,
        divergence_flag: schedule.step_sum_diverges(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sqrt_log_values() {
        assert_relative_eq!(sqrt_log_step(0, 1.0), 1.0 / 2.0_f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(sqrt_log_step(3, 2.0), 2.0 / (2.0 * 5.0_f64.ln()), epsilon = 1e-12);
    }

    #[test]
    fn quadratic_growth_values() {
        assert_eq!(quadratic_growth_step(0, 1, 1.0), 1.0);
        assert_eq!(quadratic_growth_step(4, 10, 0.5), 1.0);
        assert_relative_eq!(quadratic_growth_step(9, 2, 3.0), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn horizon_values_and_cap() {
        assert_eq!(horizon_step(3, 2.0, None).unwrap(), 1.0);
        assert_eq!(horizon_step(3, 2.0, Some(0.25)).unwrap(), 0.25);
        assert_relative_eq!(horizon_step(99, 1.0, None).unwrap(), 0.1, epsilon = 1e-12);
        assert!(horizon_step(3, 2.0, Some(0.0)).is_err());
        assert!(horizon_step(3, 2.0, Some(-1.0)).is_err());
    }

    #[test]
    fn sqrt_log_square_sum_stays_below_analytic_bound() {
        // The tail bound: sum of alpha_k^2 <= 2 * delta^2 / (ln 2)^2.
        for &delta in &[0.5, 1.0, 3.0] {
            let schedule = StepSchedule::SqrtLog { delta };
            let report = validate_summability(&schedule, 10_000);
            let bound = 2.0 * delta * delta / 2.0_f64.ln().powi(2);
            assert!(report.sum_alpha_sq <= bound, "{} > {}", report.sum_alpha_sq, bound);
            assert!(report.divergence_flag);
        }
    }

    #[test]
    fn fixed_horizon_summability() {
        let schedule = StepSchedule::FixedHorizon { delta: 1.0, horizon: 10_000, cap: None };
        let report = validate_summability(&schedule, 10_000);
        assert_relative_eq!(report.sum_alpha, 1.0e4 / (10_001.0_f64).sqrt(), epsilon = 1e-9);
        assert!(!report.divergence_flag);
    }

    #[test]
    fn harmonic_partial_sum() {
        let schedule = StepSchedule::QuadraticGrowth { blocks: 1, kappa3: 1.0 };
        let report = validate_summability(&schedule, 10);
        let h10: f64 = (1..=10).map(|k| 1.0 / k as f64).sum();
        assert_relative_eq!(report.sum_alpha, h10, epsilon = 1e-12);
        assert_relative_eq!(report.sum_alpha, 2.928968, epsilon = 1e-6);
        assert!(report.divergence_flag);
    }

    #[test]
    fn positivity_and_monotonicity() {
        let schedules = [
            StepSchedule::SqrtLog { delta: 2.0 },
            StepSchedule::QuadraticGrowth { blocks: 4, kappa3: 0.5 },
            StepSchedule::FixedHorizon { delta: 1.0, horizon: 100, cap: Some(0.05) },
        ];
        for schedule in &schedules {
            schedule.validate().unwrap();
            let mut prev = f64::INFINITY;
            // Spot-check up to very large k, including the 10^9 regime.
            for &k in &[0usize, 1, 2, 10, 1000, 1_000_000, 1_000_000_000] {
                let a = schedule.step(k);
                assert!(a > 0.0 && a.is_finite(), "step {a} at k={k}");
                match schedule {
                    StepSchedule::FixedHorizon { .. } => {}
                    _ => assert!(a <= prev, "non-monotone at k={k}"),
                }
                prev = a;
            }
        }
    }
}
