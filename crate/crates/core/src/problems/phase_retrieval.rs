//! Real-valued robust phase retrieval:
//! `f(x) = (1/n) || (Ax)^{o2} - b^{o2} ||_1` (`o2` is the entrywise square).
//!
//! Residual cache: `s = Ax`. The squared measurements may contain negative
//! entries when outliers are injected verbatim; the objective and the
//! selection rule below are well defined either way.

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::matrix::DenseMatrix;
use crate::oracle::{
    CompositeOracle, LinearBoundConstants, ResidualState, SubdifferentialBox, WeakConvexityCase,
    WeakConvexityInfo, KINK_TOL,
};
use crate::vector::{sign, Vector};
use std::ops::Range;
use std::sync::OnceLock;

#[derive(Debug)]
pub struct PhaseRetrieval {
    a: DenseMatrix,
    b_sq: Vec<f64>,
    sigma_max: OnceLock<f64>,
}

impl PhaseRetrieval {
    pub fn new(a: DenseMatrix, b_sq: Vec<f64>) -> Result<Self> {
        if b_sq.len() != a.nrows() {
            return Err(Error::DimensionMismatch { expected: a.nrows(), got: b_sq.len() });
        }
        Ok(Self { a, b_sq, sigma_max: OnceLock::new() })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn squared_measurements(&self) -> &[f64] {
        &self.b_sq
    }

    pub fn sigma_max(&self) -> f64 {
        *self.sigma_max.get_or_init(|| spectral_norm(&self.a))
    }

    /// Classical spectral initialization: the top eigenvector of the
    /// measurement-weighted covariance `(1/n) sum_i b_i^2 a_i a_i^T`
    /// (negative entries ignored), scaled to the signal energy implied by
    /// the mean squared measurement. Deterministic.
    pub fn spectral_init(&self) -> Vector {
        let d = self.dim();
        let n = self.num_residuals();
        let mut rng = crate::rng::RngState::new(0x5eed_0003);
        let mut v: Vec<f64> = (0..d).map(|_| rng.next_f64() - 0.5).collect();
        let norm = |u: &[f64]| u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv = norm(&v);
        for x in v.iter_mut() {
            *x /= nv;
        }
        for _ in 0..200 {
            let av = self.a.apply(&v);
            let weighted: Vec<f64> = av
                .iter()
                .zip(&self.b_sq)
                .map(|(&vi, &bi)| if bi > 0.0 { bi * vi } else { 0.0 })
                .collect();
            let mut w = self.a.t_apply(&weighted);
            let nw = norm(&w);
            if nw == 0.0 {
                break;
            }
            for x in w.iter_mut() {
                *x /= nw;
            }
            v = w;
        }
        // Energy estimate: sum of b^2 is roughly ||A x*||^2, which for an
        // isotropic direction is (trace(A^T A) / d) ||x*||^2.
        let sum_b: f64 = self.b_sq.iter().map(|&b| b.max(0.0)).sum();
        let trace: f64 = (0..n).map(|i| self.a.row_norm(i).powi(2)).sum();
        let scale = if trace > 0.0 { (d as f64 * sum_b / trace).sqrt() } else { 1.0 };
        for x in v.iter_mut() {
            *x *= scale;
        }
        Vector::new(v).expect("finite spectral initializer")
    }
}

impl CompositeOracle for PhaseRetrieval {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn num_residuals(&self) -> usize {
        self.a.nrows()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let s = self.a.apply(x);
        let n = s.len() as f64;
        s.iter().zip(&self.b_sq).map(|(&si, &bi)| (si * si - bi).abs()).sum::<f64>() / n
    }

    fn objective_from_state(&self, state: &ResidualState) -> f64 {
        let n = state.s.len() as f64;
        state
            .s
            .iter()
            .zip(&self.b_sq)
            .map(|(&si, &bi)| (si * si - bi).abs())
            .sum::<f64>()
            / n
    }

    fn init_state(&self, x0: Vector) -> ResidualState {
        let s = self.a.apply(x0.as_slice());
        ResidualState { x: x0, s }
    }

    /// `(2/n) * s_i * sign(s_i^2 - b_i^2)`; kinks select zero.
    fn outer_subgradient(&self, state: &ResidualState) -> Vec<f64> {
        let n = state.s.len() as f64;
        state
            .s
            .iter()
            .zip(&self.b_sq)
            .map(|(&si, &bi)| 2.0 / n * si * sign(si * si - bi))
            .collect()
    }

    fn block_jacobian_transpose_apply(
        &self,
        _state: &ResidualState,
        range: Range<usize>,
        zeta: &[f64],
    ) -> Vec<f64> {
        self.a.block_t_apply(range, zeta)
    }

    fn state_update(&self, state: &mut ResidualState, range: Range<usize>, new_block: &[f64]) {
        let x = state.x.as_mut_slice();
        let delta: Vec<f64> = range
            .clone()
            .zip(new_block)
            .map(|(j, &new)| {
                let d = new - x[j];
                x[j] = new;
                d
            })
            .collect();
        self.a.block_apply_add(range, &delta, 1.0, &mut state.s);
    }

    fn weak_convexity_modulus(&self) -> WeakConvexityInfo {
        let n = self.num_residuals() as f64;
        let sigma = self.sigma_max();
        WeakConvexityInfo {
            rho: 2.0 * sigma * sigma / n,
            provenance: WeakConvexityCase::LipschitzOuter,
        }
    }

    fn linear_bound_constants(&self) -> LinearBoundConstants {
        // ||(2/n) A^T (Ax o xi)|| <= (2/n) sigma_max^2 ||x||.
        let n = self.num_residuals() as f64;
        let sigma = self.sigma_max();
        LinearBoundConstants { growth: 2.0 * sigma * sigma / n, offset: 0.0 }
    }

    fn subdifferential_box(&self, state: &ResidualState) -> Option<SubdifferentialBox> {
        // Rows with (a_i^T x)^2 on the measurement boundary contribute
        // (2/n) (a_i^T x) a_i [-1, 1].
        let n = state.s.len() as f64;
        let mut columns = Vec::new();
        let mut weights = vec![0.0; state.s.len()];
        for (i, (&si, &bi)) in state.s.iter().zip(&self.b_sq).enumerate() {
            let gap = si * si - bi;
            if gap.abs() <= KINK_TOL {
                let scale = 2.0 / n * si;
                columns.push(self.a.row(i).into_iter().map(|v| scale * v).collect());
            } else {
                weights[i] = 2.0 / n * si * sign(gap);
            }
        }
        let fixed = self.a.t_apply(&weights);
        let count = columns.len();
        Some(SubdifferentialBox { fixed, columns, lows: vec![-1.0; count], highs: vec![1.0; count] })
    }

    fn snap_to_kinks(&self, x: &[f64], tol: f64) -> Option<Vec<f64>> {
        // Snap a_i^T y to the nearest root of (a_i^T y)^2 = b_i^2; rows with
        // negative injected b^2 have no boundary to snap to.
        let s = self.a.apply(x);
        let mut normals = Vec::new();
        let mut targets = Vec::new();
        for (i, (&si, &bi)) in s.iter().zip(&self.b_sq).enumerate() {
            if bi < 0.0 {
                continue;
            }
            if (si * si - bi).abs() <= tol {
                let root = bi.sqrt();
                normals.push(self.a.row(i));
                targets.push(if si >= 0.0 { root } else { -root });
            }
        }
        if normals.is_empty() {
            return None;
        }
        crate::linalg::project_onto_affine(x, &normals, &targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::BlockPartition;

    #[test]
    fn objective_direct_evaluation() {
        // A = I_2, b^2 = (1,1), x = (2,0): (1/2)(|4-1| + |0-1|) = 2.
        let p = PhaseRetrieval::new(DenseMatrix::identity(2), vec![1.0, 1.0]).unwrap();
        assert_eq!(p.objective(&[2.0, 0.0]), 2.0);
    }

    #[test]
    fn outer_subgradient_selection() {
        let p = PhaseRetrieval::new(DenseMatrix::identity(2), vec![1.0, 1.0]).unwrap();
        let state = p.init_state(Vector::new(vec![2.0, 0.0]).unwrap());
        // (2/2) * (2 sign(3), 0 sign(-1)) = (2, 0); the zero entry holds for
        // any admissible kink selection since s_2 = 0.
        assert_eq!(p.outer_subgradient(&state), vec![2.0, 0.0]);
    }

    #[test]
    fn zero_iterate_annihilates_blocks() {
        let p = PhaseRetrieval::new(DenseMatrix::identity(4), vec![1.0; 4]).unwrap();
        let state = p.init_state(Vector::zeros(4));
        let partition = BlockPartition::new(4, 2).unwrap();
        for i in 0..2 {
            assert_eq!(p.block_subgradient(&state, i, &partition), vec![0.0, 0.0]);
        }
    }
}
