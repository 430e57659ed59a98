//! Reference optimum estimation.
//!
//! Gap plots need an `f*`; it is estimated by full-subgradient runs from
//! several starts, keeping the best objective seen at any iterate, with an
//! optional `1/(k+1)`-step tail for convex problems where the quadratic
//! growth constant is known. The provenance is recorded so outputs never
//! present an invented optimum.

use crate::error::{Error, Result};
use crate::oracle::CompositeOracle;
use crate::rng::RngState;
use crate::schedule::{quadratic_growth_step, sqrt_log_step};
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceProvenance {
    pub method: String,
    pub iterations: usize,
    pub seed_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceSolution {
    pub f_star: f64,
    pub x_ref: Vector,
    pub provenance: ReferenceProvenance,
}

/// Runs the full subgradient method with diminishing steps for `budget`
/// iterations from `num_seeds` starts (zero first, then scaled normal draws)
/// and records the best objective found. For problems with `rho = 0` and a
/// supplied `kappa3`, a quadratic-growth tail of `budget / 2` iterations is
/// appended from the incumbent.
pub fn compute_reference<P: CompositeOracle + ?Sized>(
    problem: &P,
    budget: usize,
    delta: f64,
    base_seed: u64,
    num_seeds: usize,
    kappa3: Option<f64>,
) -> Result<ReferenceSolution> {
    if budget == 0 || num_seeds == 0 || !(delta > 0.0) {
        return Err(Error::InvalidConfig(
            "reference requires budget >= 1, num_seeds >= 1, delta > 0".into(),
        ));
    }
    let dim = problem.dim();
    let mut best_f = f64::INFINITY;
    let mut best_x = Vector::zeros(dim);

    for seed_idx in 0..num_seeds {
        let x0 = if seed_idx == 0 {
            Vector::zeros(dim)
        } else {
            let mut rng = RngState::new(base_seed.wrapping_add(seed_idx as u64));
            let scale = 1.0 / (dim as f64).sqrt();
            Vector::new((0..dim).map(|_| rng.normal_scaled(scale)).collect())?
        };
        descend(problem, x0, budget, &mut best_f, &mut best_x, |k| sqrt_log_step(k, delta))?;
    }

    let mut method = String::from("subgrad(sqrt_log)");
    if let Some(kappa3) = kappa3 {
        if problem.weak_convexity_modulus().rho == 0.0 {
            let tail = (budget / 2).max(1);
            let start = best_x.clone();
            descend(problem, start, tail, &mut best_f, &mut best_x, |k| {
                quadratic_growth_step(k, 1, kappa3)
            })?;
            method.push_str("+qg_tail");
        }
    }

    Ok(ReferenceSolution {
        f_star: best_f,
        x_ref: best_x,
        provenance: ReferenceProvenance {
            method,
            iterations: budget,
            seed_count: num_seeds,
        },
    })
}

fn descend<P: CompositeOracle + ?Sized>(
    problem: &P,
    x0: Vector,
    iterations: usize,
    best_f: &mut f64,
    best_x: &mut Vector,
    step: impl Fn(usize) -> f64,
) -> Result<()> {
    let dim = problem.dim();
    let mut state = problem.init_state(x0);
    for k in 0..iterations {
        let f = problem.objective_from_state(&state);
        if !f.is_finite() {
            return Err(Error::Diverged { iteration: k, context: "reference run" });
        }
        if f < *best_f {
            *best_f = f;
            *best_x = state.x.clone();
        }
        let r = problem.full_subgradient(&state);
        let alpha = step(k);
        let next: Vec<f64> =
            state.x.as_slice().iter().zip(&r).map(|(x, g)| x - alpha * g).collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { iteration: k, context: "reference iterate" });
        }
        problem.state_update(&mut state, 0..dim, &next);
    }
    let f = problem.objective_from_state(&state);
    if f < *best_f {
        *best_f = f;
        *best_x = state.x.clone();
    }
    Ok(())
}
