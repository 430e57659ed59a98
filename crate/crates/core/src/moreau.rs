//! Moreau-envelope machinery and error-bound probes.
//!
//! For a `rho`-weakly convex `f` and `lambda < 1/rho`, the inner problem
//! `g(y) = f(y) + ||y - x||^2 / (2 lambda)` is `(1/lambda - rho)`-strongly
//! convex, so a deterministic subgradient method certifies its own
//! suboptimality: any subgradient `nu` of `g` at `y` gives the lower bound
//! `g* >= g(y) - ||nu||^2 / (2 mu)`. The returned `certified_gap` is the
//! distance between the best inner value and the best such lower bound.

use crate::error::{Error, Result};
use crate::linalg::gram_min_eigenvalue;
use crate::oracle::{CompositeOracle, SubdifferentialBox};
use crate::problems::PhaseRetrieval;
use crate::vector::{dist2, norm2, Vector};

#[derive(Debug, Clone, Copy)]
pub struct MoreauConfig {
    pub lambda: f64,
    /// Weak-convexity modulus of the probed problem.
    pub rho: f64,
    pub inner_budget: usize,
    /// Early-exit threshold on the certified gap.
    pub inner_tolerance: f64,
}

impl MoreauConfig {
    pub fn new(lambda: f64, rho: f64) -> Self {
        Self { lambda, rho, inner_budget: 5_000, inner_tolerance: 0.0 }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.inner_budget = budget;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.inner_tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || self.rho < 0.0 || self.inner_budget == 0 {
            return Err(Error::InvalidConfig(format!(
                "lambda must be > 0, rho >= 0, budget >= 1 (got {self:?})"
            )));
        }
        if self.rho > 0.0 && self.lambda >= 1.0 / self.rho {
            return Err(Error::InvalidLambda { lambda: self.lambda, rho: self.rho });
        }
        Ok(())
    }
}

/// Approximate proximal point with an inner suboptimality certificate.
#[derive(Debug, Clone)]
pub struct ProxResult {
    /// Best inner iterate found.
    pub point: Vector,
    /// `f(point) + ||point - x||^2 / (2 lambda)`, an upper bound on the
    /// envelope value at `x`.
    pub envelope_value: f64,
    /// `(x - point) / lambda`, the envelope gradient at the returned point.
    pub envelope_gradient: Vector,
    /// Upper bound on `envelope_value - f_lambda(x)`.
    pub certified_gap: f64,
}

/// Estimates `prox_{lambda, f}(x)` by a deterministic subgradient method
/// warm-started at `x`, with strongly convex steps `2 / (mu (t+2))` and
/// running-average fallback; returns the best iterate by inner objective.
pub fn prox_estimate<P: CompositeOracle + ?Sized>(
    problem: &P,
    x: &[f64],
    cfg: &MoreauConfig,
) -> Result<ProxResult> {
    cfg.validate()?;
    if x.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: x.len() });
    }
    let dim = problem.dim();
    let mu = 1.0 / cfg.lambda - cfg.rho;
    let full = 0..dim;

    let warm = Vector::new(x.to_vec()).map_err(|_| Error::NonFinite { context: "prox center" })?;
    let mut state = problem.init_state(warm);
    let inner_value = |p: &P, st: &crate::oracle::ResidualState| {
        p.objective_from_state(st) + dist2(st.x.as_slice(), x).powi(2) / (2.0 * cfg.lambda)
    };

    let mut best_value = inner_value(problem, &state);
    let mut best_point = state.x.clone();
    let mut lower_bound = f64::NEG_INFINITY;

    // (t+1)-weighted running average of the inner iterates.
    let mut avg = state.x.as_slice().to_vec();
    let mut avg_weight = 0.0f64;
    let avg_stride = (cfg.inner_budget / 64).max(1);

    for t in 0..cfg.inner_budget {
        let g_val = inner_value(problem, &state);
        let mut nu = problem.full_subgradient(&state);
        for (n, (yj, xj)) in nu.iter_mut().zip(state.x.as_slice().iter().zip(x)) {
            *n += (yj - xj) / cfg.lambda;
        }
        let nu_norm = norm2(&nu);
        lower_bound = lower_bound.max(g_val - nu_norm * nu_norm / (2.0 * mu));
        if g_val < best_value {
            best_value = g_val;
            best_point = state.x.clone();
        }
        if best_value - lower_bound <= cfg.inner_tolerance {
            break;
        }

        let beta = 2.0 / (mu * (t as f64 + 2.0));
        let y = state.x.as_slice();
        let next: Vec<f64> = y.iter().zip(&nu).map(|(v, n)| v - beta * n).collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged { iteration: t, context: "inner prox iterate" });
        }

        let w = t as f64 + 1.0;
        avg_weight += w;
        for (a, v) in avg.iter_mut().zip(&next) {
            *a += (w / avg_weight) * (v - *a);
        }
        problem.state_update(&mut state, full.clone(), &next);

        if (t + 1) % avg_stride == 0 {
            let avg_val = problem.objective(&avg)
                + dist2(&avg, x).powi(2) / (2.0 * cfg.lambda);
            if avg_val < best_value {
                best_value = avg_val;
                best_point = Vector::new(avg.clone())
                    .map_err(|_| Error::NonFinite { context: "inner average" })?;
            }
        }
    }
    // The loop evaluates before stepping; account for the final iterate.
    let last_val = inner_value(problem, &state);
    if last_val < best_value {
        best_value = last_val;
        best_point = state.x.clone();
    }

    // Tighter certificates at and near the returned point: the strongly
    // convex bound with the minimal-norm element of the inner
    // subdifferential, searched over the kink box. At a kink-active prox
    // point the selected subgradient never vanishes but the minimal-norm
    // one does; since iterates hover near kink surfaces without landing on
    // them, the bound is also evaluated at snapped points with the nearby
    // kinks placed exactly on their surfaces.
    if best_value - lower_bound > cfg.inner_tolerance {
        let certify_at = |point: &[f64], lb: &mut f64| {
            let state = match Vector::new(point.to_vec()) {
                Ok(v) => problem.init_state(v),
                Err(_) => return,
            };
            let g_val = problem.objective_from_state(&state)
                + dist2(point, x).powi(2) / (2.0 * cfg.lambda);
            if let Some(mut sbox) = problem.subdifferential_box(&state) {
                for (f, (yj, xj)) in sbox.fixed.iter_mut().zip(point.iter().zip(x)) {
                    *f += (yj - xj) / cfg.lambda;
                }
                let m = min_norm_in_box(&sbox);
                *lb = lb.max(g_val - m * m / (2.0 * mu));
            }
        };
        let candidates: Vec<&[f64]> = vec![best_point.as_slice(), state.x.as_slice(), &avg];
        'outer: for point in candidates {
            certify_at(point, &mut lower_bound);
            for snap_tol in [1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2] {
                if best_value - lower_bound <= cfg.inner_tolerance {
                    break 'outer;
                }
                if let Some(snapped) = problem.snap_to_kinks(point, snap_tol) {
                    certify_at(&snapped, &mut lower_bound);
                }
            }
            if best_value - lower_bound <= cfg.inner_tolerance {
                break;
            }
        }
    }

    let gradient: Vec<f64> = x
        .iter()
        .zip(best_point.as_slice())
        .map(|(xj, yj)| (xj - yj) / cfg.lambda)
        .collect();
    Ok(ProxResult {
        envelope_value: best_value,
        envelope_gradient: Vector::new(gradient)
            .map_err(|_| Error::NonFinite { context: "envelope gradient" })?,
        point: best_point,
        certified_gap: (best_value - lower_bound).max(0.0),
    })
}

/// Norm of the envelope gradient at `x`, with the inner certificate.
pub fn envelope_gradient_norm<P: CompositeOracle + ?Sized>(
    problem: &P,
    x: &[f64],
    cfg: &MoreauConfig,
) -> Result<(f64, f64)> {
    let prox = prox_estimate(problem, x, cfg)?;
    Ok((prox.envelope_gradient.norm(), prox.certified_gap))
}

/// Achieved minimal norm over a boxed subdifferential: minimizes
/// `|| fixed + sum_j xi_j col_j ||` over the box by projected gradient
/// descent on the squared norm (step `1 / lambda_max` of the small Gram
/// matrix, 10^3 iterations, started at the selected element `xi = 0`).
/// The result is the norm of a concrete member of the set, hence an upper
/// bound on the true distance to zero.
pub fn min_norm_in_box(sbox: &SubdifferentialBox) -> f64 {
    const PGD_ITERS: usize = 1_000;
    let m = sbox.columns.len();
    if m == 0 {
        return norm2(&sbox.fixed);
    }

    let gram: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| dotvec(&sbox.columns[i], &sbox.columns[j])).collect())
        .collect();
    let mut v = vec![1.0 / (m as f64).sqrt(); m];
    let mut lmax = 0.0f64;
    for _ in 0..200 {
        let w: Vec<f64> = (0..m).map(|i| dotvec(&gram[i], &v)).collect();
        let nw = norm2(&w);
        if nw == 0.0 {
            break;
        }
        lmax = nw;
        v = w.iter().map(|x| x / nw).collect();
    }
    if lmax == 0.0 {
        // All free columns vanish; the box is degenerate.
        return norm2(&sbox.fixed);
    }

    let step = 1.0 / lmax;
    let mut xi = vec![0.0; m];
    let mut resid = sbox.fixed.clone();
    for _ in 0..PGD_ITERS {
        let mut moved = false;
        for j in 0..m {
            let grad = dotvec(&sbox.columns[j], &resid);
            let next = (xi[j] - step * grad).clamp(sbox.lows[j], sbox.highs[j]);
            if next != xi[j] {
                let delta = next - xi[j];
                for (r, c) in resid.iter_mut().zip(&sbox.columns[j]) {
                    *r += delta * c;
                }
                xi[j] = next;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    norm2(&resid)
}

/// Upper bound on `dist(0, partial f(x))` for the phase retrieval problem.
///
/// The subdifferential at `x` is the set
/// `(2/n) [ sum_{I1} a_i (a_i^T x) [-1,1] + sum_{I2} a_i a_i^T x
///   - sum_{I3} a_i a_i^T x ]`, split by the sign of `(a_i^T x)^2 - b_i^2`
/// (`I1` within `1e-9` of zero, ties included). The free-coefficient box is
/// searched by [`min_norm_in_box`].
pub fn min_norm_subgradient_pr(problem: &PhaseRetrieval, x: &[f64]) -> f64 {
    let state = problem
        .init_state(Vector::new(x.to_vec()).expect("finite probe point"));
    let sbox = problem.subdifferential_box(&state).expect("phase retrieval exposes kinks");
    min_norm_in_box(&sbox)
}

fn dotvec(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Worst-case bound on the norm of any critical point of the phase
/// retrieval problem: `2 sum_i ||a_i|| |b_i| / lambda_min(A^T A)`, summing
/// over all rows with a well-defined measurement magnitude (negative
/// injected `b^2` entries can never sit on or below the boundary, so
/// dropping them keeps the bound valid). Errors when `A` is rank deficient.
pub fn critical_set_bound_pr(problem: &PhaseRetrieval) -> Result<f64> {
    let a = problem.matrix();
    let lambda_min = gram_min_eigenvalue(a).unwrap_or(0.0);
    if lambda_min <= 1e-10 {
        return Err(Error::RankDeficient(lambda_min));
    }
    let sum: f64 = (0..a.nrows())
        .filter(|&i| problem.squared_measurements()[i] >= 0.0)
        .map(|i| a.row_norm(i) * problem.squared_measurements()[i].sqrt())
        .sum();
    Ok(2.0 * sum / lambda_min)
}

/// One sample of the subregularity diagnostic.
#[derive(Debug, Clone, Copy)]
pub struct SubregularityRecord {
    pub dist_to_reference: f64,
    pub residual_norm: f64,
    pub ratio: f64,
}

/// Empirical error-bound probe: for each sample, the distance to the
/// reference set against a stationarity residual (a minimal-norm subgradient
/// or an envelope-gradient norm). Returns the records and the supremum ratio
/// as a subregularity-constant estimate. Diagnostic only.
pub fn subregularity_probe(
    references: &[Vector],
    samples: &[Vector],
    mut residual: impl FnMut(&[f64]) -> f64,
) -> (Vec<SubregularityRecord>, f64) {
    let mut records = Vec::with_capacity(samples.len());
    let mut kappa_hat = 0.0f64;
    for sample in samples {
        let dist = references
            .iter()
            .map(|r| dist2(sample.as_slice(), r.as_slice()))
            .fold(f64::INFINITY, f64::min);
        let res = residual(sample.as_slice());
        let ratio = if dist == 0.0 {
            0.0
        } else if res > 0.0 {
            dist / res
        } else {
            f64::INFINITY
        };
        kappa_hat = kappa_hat.max(ratio);
        records.push(SubregularityRecord { dist_to_reference: dist, residual_norm: res, ratio });
    }
    (records, kappa_hat)
}

/// Inputs for the constant calculators. `critical_norm_sq_bound` is a bound
/// on the squared norm over the critical set (square the value returned by
/// [`critical_set_bound_pr`] when using it here).
#[derive(Debug, Clone, Copy)]
pub struct TheoryInputs {
    pub growth: f64,
    pub offset: f64,
    pub rho: f64,
    pub lambda: f64,
    pub blocks: usize,
    /// Bound on the sum of squared steps.
    pub alpha_sq_sum: f64,
    /// Estimate of the initial distance to the solution set.
    pub dist0: f64,
    pub xstar_norm: f64,
    pub critical_norm_sq_bound: f64,
    pub delta: f64,
    pub kappa2: Option<f64>,
    pub kappa3: Option<f64>,
}

/// The derived constants together with callable rate envelopes.
#[derive(Debug, Clone, Copy)]
pub struct TheoryBounds {
    /// Bound on the expected squared distance to the solution set.
    pub b1: f64,
    /// Error constant of the convex-regime recursion.
    pub c1: f64,
    /// Error constant of the weakly convex recursion.
    pub c2: f64,
    pub kappa2: Option<f64>,
    pub kappa3: Option<f64>,
    inputs: TheoryInputs,
}

pub fn theory_bounds(inputs: TheoryInputs) -> Result<TheoryBounds> {
    let TheoryInputs {
        growth: l1,
        offset: l2,
        rho,
        lambda,
        blocks,
        alpha_sq_sum,
        dist0,
        xstar_norm,
        critical_norm_sq_bound,
        ..
    } = inputs;
    for (name, v) in [
        ("growth", l1),
        ("offset", l2),
        ("rho", rho),
        ("alpha_sq_sum", alpha_sq_sum),
        ("dist0", dist0),
        ("xstar_norm", xstar_norm),
        ("critical_norm_sq_bound", critical_norm_sq_bound),
    ] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidConfig(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    if !(lambda > 0.0) || lambda * rho >= 1.0 {
        return Err(Error::InvalidLambda { lambda, rho });
    }
    if blocks == 0 || !(inputs.delta > 0.0) {
        return Err(Error::InvalidConfig("blocks >= 1 and delta > 0 required".into()));
    }

    let nf = blocks as f64;
    let b1 = (dist0 * dist0 + (4.0 * l1 * l1 * xstar_norm * xstar_norm + 2.0 * l2 * l2)
        * alpha_sq_sum
        / nf)
        * (1.0 + 4.0 * l1 * l1 * alpha_sq_sum / nf).exp();
    if !b1.is_finite() {
        return Err(Error::BoundOverflow);
    }
    let c1 = 28.0 * l1 * l1 * b1 + 16.0 * l1 * l1 * xstar_norm * xstar_norm + 2.0 * l2 * l2;
    let c2 = (2.0 * l1 * l1 * critical_norm_sq_bound + l2 * l2) / lambda;
    if !c1.is_finite() || !c2.is_finite() {
        return Err(Error::BoundOverflow);
    }
    Ok(TheoryBounds { b1, c1, c2, kappa2: inputs.kappa2, kappa3: inputs.kappa3, inputs })
}

impl TheoryBounds {
    /// Convex-regime envelope on the weighted-average suboptimality gap
    /// under the `delta / (sqrt(k+1) ln(k+2))` schedule:
    /// `ln(k+2) (N dist0^2 / (2 delta) + C1 delta / (ln 2)^2) / sqrt(k+1)`.
    pub fn convex_gap_envelope(&self, k: usize) -> f64 {
        let nf = self.inputs.blocks as f64;
        let kf = k as f64;
        (kf + 2.0).ln()
            * (nf * self.inputs.dist0 * self.inputs.dist0 / (2.0 * self.inputs.delta)
                + self.c1 * self.inputs.delta / 2.0_f64.ln().powi(2))
            / (kf + 1.0).sqrt()
    }

    /// Quadratic-growth envelope on the expected squared distance:
    /// `N C1 kappa3^2 / (k+1)`. Requires `kappa3`.
    pub fn quadratic_growth_envelope(&self, k: usize) -> Option<f64> {
        let kappa3 = self.kappa3?;
        let nf = self.inputs.blocks as f64;
        Some(nf * self.c1 * kappa3 * kappa3 / (k as f64 + 1.0))
    }

    /// Weakly convex stationarity envelope on the minimal expected squared
    /// envelope-gradient norm over a fixed horizon:
    /// `(4N (f_lambda(x0) - f*) / delta + 4 C2 delta) / ((1-lambda rho) sqrt(T+1))`.
    pub fn stationarity_envelope(&self, envelope_gap0: f64, horizon: usize) -> f64 {
        let nf = self.inputs.blocks as f64;
        (4.0 * nf * envelope_gap0 / self.inputs.delta + 4.0 * self.c2 * self.inputs.delta)
            / ((1.0 - self.inputs.lambda * self.inputs.rho) * (horizon as f64 + 1.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use crate::problems::{Loss, MEstimator};

    fn abs_problem() -> MEstimator {
        MEstimator::new(DenseMatrix::identity(1), vec![0.0], 0.0, Loss::L1).unwrap()
    }

    /// Soft-threshold closed form for f = |.|: prox(x) = sign(x) max(|x|-lambda, 0).
    fn soft_threshold(x: f64, lambda: f64) -> f64 {
        x.signum() * (x.abs() - lambda).max(0.0)
    }

    #[test]
    fn prox_of_abs_matches_soft_threshold() {
        let p = abs_problem();
        let cfg = MoreauConfig::new(1.0, 0.0).with_budget(2_000);
        for &x in &[2.0, 0.5, -1.5, 0.0] {
            let res = prox_estimate(&p, &[x], &cfg).unwrap();
            let want = soft_threshold(x, 1.0);
            assert!(
                (res.point[0] - want).abs() <= 1e-6 + res.certified_gap.sqrt(),
                "x={x}: got {} want {want} (gap {})",
                res.point[0],
                res.certified_gap
            );
        }
        // x = 2: y = 1, f_lambda(2) = 1.5, grad = 1.
        let res = prox_estimate(&p, &[2.0], &cfg).unwrap();
        assert!((res.point[0] - 1.0).abs() < 1e-9);
        assert!((res.envelope_value - 1.5).abs() < 1e-9);
        assert!((res.envelope_gradient[0] - 1.0).abs() < 1e-9);
        // x = 0.5: y = 0, f_lambda = 0.125, grad = 0.5.
        let res = prox_estimate(&p, &[0.5], &cfg).unwrap();
        assert!((res.point[0]).abs() < 1e-9);
        assert!((res.envelope_value - 0.125).abs() < 1e-9);
        assert!((res.envelope_gradient[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn critical_point_is_a_prox_fixed_point() {
        let p = abs_problem();
        let cfg = MoreauConfig::new(1.0, 0.0);
        let res = prox_estimate(&p, &[0.0], &cfg).unwrap();
        assert!(res.point[0].abs() < 1e-10);
        assert!(res.envelope_gradient[0].abs() < 1e-10);
        let (norm, _) = envelope_gradient_norm(&p, &[0.0], &cfg).unwrap();
        assert!(norm < 1e-10);
    }

    #[test]
    fn invalid_lambda_is_rejected() {
        let cfg = MoreauConfig::new(2.0, 1.0);
        assert!(cfg.validate().is_err());
        let cfg = MoreauConfig::new(0.99, 1.0);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn min_norm_subgradient_no_boundary() {
        // A = I_2, b^2 = (1,1), x = (2,0): index 1 in I2, index 2 on the
        // boundary with a_2^T x = 0 (vanishing column), value ||(2,0)|| = 2.
        let p = PhaseRetrieval::new(DenseMatrix::identity(2), vec![1.0, 1.0]).unwrap();
        let v = min_norm_subgradient_pr(&p, &[2.0, 0.0]);
        assert!((v - 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn min_norm_vanishes_at_exact_solution() {
        let a = DenseMatrix::from_row_major(3, 2, &[1.0, 0.5, -0.25, 1.0, 0.3, 0.3]).unwrap();
        let xstar = [0.8, -0.6];
        let b_sq: Vec<f64> = (0..3).map(|i| a.row_dot(i, &xstar).powi(2)).collect();
        let p = PhaseRetrieval::new(a, b_sq).unwrap();
        let v = min_norm_subgradient_pr(&p, &xstar);
        assert!(v < 1e-12, "{v}");
    }

    #[test]
    fn critical_bound_identity_case() {
        let p = PhaseRetrieval::new(DenseMatrix::identity(2), vec![1.0, 1.0]).unwrap();
        let b2 = critical_set_bound_pr(&p).unwrap();
        assert!((b2 - 4.0).abs() < 1e-6, "{b2}");
    }

    #[test]
    fn critical_bound_zero_measurements() {
        let p = PhaseRetrieval::new(DenseMatrix::identity(2), vec![0.0, 0.0]).unwrap();
        assert!(critical_set_bound_pr(&p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn critical_bound_rejects_rank_deficiency() {
        let a = DenseMatrix::from_row_major(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let p = PhaseRetrieval::new(a, vec![1.0, 1.0]).unwrap();
        assert!(critical_set_bound_pr(&p).is_err());
    }

    #[test]
    fn probe_handles_coincident_sample() {
        let refs = vec![Vector::zeros(1)];
        let samples = vec![Vector::zeros(1), Vector::new(vec![3.0]).unwrap()];
        // 1-D f = |x|: dist(0, partial f(x)) = 1 away from zero.
        let (records, kappa) = subregularity_probe(&refs, &samples, |_| 1.0);
        assert_eq!(records[0].ratio, 0.0);
        assert!((records[1].ratio - 3.0).abs() < 1e-12);
        assert!((kappa - 3.0).abs() < 1e-12);
    }

    fn base_inputs() -> TheoryInputs {
        TheoryInputs {
            growth: 0.0,
            offset: 1.0,
            rho: 0.0,
            lambda: 1.0,
            blocks: 1,
            alpha_sq_sum: 2.0 / 2.0_f64.ln().powi(2),
            dist0: 1.0,
            xstar_norm: 1.0,
            critical_norm_sq_bound: 1.0,
            delta: 1.0,
            kappa2: None,
            kappa3: None,
        }
    }

    #[test]
    fn lipschitz_case_collapses_exponent() {
        // growth = 0: B1 = (dist0^2 + 2 offset^2 abar / N) e, C1 = 2 offset^2.
        let inputs = base_inputs();
        let bounds = theory_bounds(inputs).unwrap();
        let abar = inputs.alpha_sq_sum;
        let want_b1 = (1.0 + 2.0 * abar) * 1.0_f64.exp();
        assert!((bounds.b1 - want_b1).abs() < 1e-12);
        assert!((bounds.c1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn convex_envelope_value_at_zero() {
        // ln 2 (1/2 + 2/(ln 2)^2) with N = 1, dist0 = 1, delta = 1, C1 = 2.
        let bounds = theory_bounds(base_inputs()).unwrap();
        let v = bounds.convex_gap_envelope(0);
        let want = 2.0_f64.ln() * (0.5 + 2.0 / 2.0_f64.ln().powi(2));
        assert!((v - want).abs() < 1e-12);
        assert!((v - 3.232).abs() < 5e-4, "{v}");
    }

    #[test]
    fn convex_envelope_eventually_monotone() {
        // ln(k+2)/sqrt(k+1) peaks at k = 3; the curve is nonincreasing past
        // that point regardless of the constants.
        let bounds = theory_bounds(base_inputs()).unwrap();
        let mut prev = bounds.convex_gap_envelope(3);
        for k in 4..10_000 {
            let cur = bounds.convex_gap_envelope(k);
            assert!(cur <= prev + 1e-15, "not monotone at k={k}");
            prev = cur;
        }
    }

    #[test]
    fn overflowing_bound_is_an_error() {
        let mut inputs = base_inputs();
        inputs.growth = 10.0;
        inputs.alpha_sq_sum = 1e6;
        assert!(matches!(theory_bounds(inputs), Err(Error::BoundOverflow)));
    }
}
