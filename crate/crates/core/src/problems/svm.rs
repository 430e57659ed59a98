//! Linear SVM with hinge loss and weight decay:
//! `f(x) = (1/n) sum_i max{0, 1 - b_i a_i^T x} + (p/2) ||x||^2`.
//!
//! The signed matrix `At = diag(b) A` is precomputed, and the residual cache
//! is `s = 1_n - At x`. Note the reversed-sign patch
//! `s += At_I (x_I_old - x_I_new)`, consistent with that definition.

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::matrix::DenseMatrix;
use crate::oracle::{
    CompositeOracle, LinearBoundConstants, ResidualState, SubdifferentialBox, WeakConvexityCase,
    WeakConvexityInfo, KINK_TOL,
};
use crate::vector::Vector;
use std::ops::Range;
use std::sync::OnceLock;

#[derive(Debug)]
pub struct LinearSvm {
    /// `diag(labels) * A`, rows `b_i * a_i^T`.
    a_signed: DenseMatrix,
    reg: f64,
    sigma_max: OnceLock<f64>,
}

impl LinearSvm {
    pub fn new(a: DenseMatrix, labels: &[f64], reg: f64) -> Result<Self> {
        if labels.len() != a.nrows() {
            return Err(Error::DimensionMismatch { expected: a.nrows(), got: labels.len() });
        }
        if labels.iter().any(|&b| b != 1.0 && b != -1.0) {
            return Err(Error::InvalidConfig("labels must be exactly +1 or -1".into()));
        }
        if !(reg > 0.0) {
            return Err(Error::InvalidConfig(format!("regularization must be > 0, got {reg}")));
        }
        let a_signed =
            DenseMatrix::from_fn(a.nrows(), a.ncols(), |i, j| labels[i] * a.get(i, j));
        Ok(Self { a_signed, reg, sigma_max: OnceLock::new() })
    }

    pub fn signed_matrix(&self) -> &DenseMatrix {
        &self.a_signed
    }

    pub fn regularization(&self) -> f64 {
        self.reg
    }

    fn sigma_max(&self) -> f64 {
        *self.sigma_max.get_or_init(|| spectral_norm(&self.a_signed))
    }

    fn hinge_mean(&self, s: &[f64]) -> f64 {
        s.iter().map(|&v| v.max(0.0)).sum::<f64>() / s.len() as f64
    }
}

impl CompositeOracle for LinearSvm {
    fn dim(&self) -> usize {
        self.a_signed.ncols()
    }

    fn num_residuals(&self) -> usize {
        self.a_signed.nrows()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let ax = self.a_signed.apply(x);
        let s: Vec<f64> = ax.iter().map(|v| 1.0 - v).collect();
        let sq: f64 = x.iter().map(|v| v * v).sum();
        self.hinge_mean(&s) + 0.5 * self.reg * sq
    }

    fn objective_from_state(&self, state: &ResidualState) -> f64 {
        let sq: f64 = state.x.as_slice().iter().map(|v| v * v).sum();
        self.hinge_mean(&state.s) + 0.5 * self.reg * sq
    }

    fn init_state(&self, x0: Vector) -> ResidualState {
        let ax = self.a_signed.apply(x0.as_slice());
        let s = ax.iter().map(|v| 1.0 - v).collect();
        ResidualState { x: x0, s }
    }

    /// Hinge selector `(1/n) max{0, sign(s_i)}`, zero at the kink.
    fn outer_subgradient(&self, state: &ResidualState) -> Vec<f64> {
        let n = state.s.len() as f64;
        state.s.iter().map(|&v| if v > 0.0 { 1.0 / n } else { 0.0 }).collect()
    }

    fn block_jacobian_transpose_apply(
        &self,
        state: &ResidualState,
        range: Range<usize>,
        zeta: &[f64],
    ) -> Vec<f64> {
        // r_I = -At_I^T zeta + p x_I; the minus sign is the Jacobian of
        // s = 1_n - At x.
        let t = self.a_signed.block_t_apply(range.clone(), zeta);
        let x = state.x.as_slice();
        range
            .zip(t)
            .map(|(j, tj)| self.reg * x[j] - tj)
            .collect()
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
        // s = 1_n - At x, so the patch enters with a negative sign.
        self.a_signed.block_apply_add(range, &delta, -1.0, &mut state.s);
    }

    fn weak_convexity_modulus(&self) -> WeakConvexityInfo {
        WeakConvexityInfo { rho: 0.0, provenance: WeakConvexityCase::Convex }
    }

    fn linear_bound_constants(&self) -> LinearBoundConstants {
        // r = -(1/n) At^T h + p x with h in {0,1}^n, so
        // ||r|| <= sigma_max(At) / sqrt(n) + p ||x||.
        let n = self.num_residuals() as f64;
        LinearBoundConstants { growth: self.reg, offset: self.sigma_max() / n.sqrt() }
    }

    fn subdifferential_box(&self, state: &ResidualState) -> Option<SubdifferentialBox> {
        // Hinge kinks contribute -(1/n) at_i [0, 1].
        let n = state.s.len() as f64;
        let mut columns = Vec::new();
        let mut weights = vec![0.0; state.s.len()];
        for (i, &si) in state.s.iter().enumerate() {
            if si.abs() <= KINK_TOL {
                let row = self.a_signed.row(i);
                columns.push(row.into_iter().map(|v| -v / n).collect());
            } else if si > 0.0 {
                weights[i] = 1.0 / n;
            }
        }
        let t = self.a_signed.t_apply(&weights);
        let x = state.x.as_slice();
        let fixed: Vec<f64> = x.iter().zip(&t).map(|(xj, tj)| self.reg * xj - tj).collect();
        let count = columns.len();
        Some(SubdifferentialBox { fixed, columns, lows: vec![0.0; count], highs: vec![1.0; count] })
    }

    fn snap_to_kinks(&self, x: &[f64], tol: f64) -> Option<Vec<f64>> {
        let ax = self.a_signed.apply(x);
        let mut normals = Vec::new();
        let mut targets = Vec::new();
        for (i, &v) in ax.iter().enumerate() {
            if (1.0 - v).abs() <= tol {
                normals.push(self.a_signed.row(i));
                targets.push(1.0);
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

    fn one_sample() -> LinearSvm {
        let a = DenseMatrix::from_row_major(1, 2, &[1.0, 0.0]).unwrap();
        LinearSvm::new(a, &[1.0], 2.0).unwrap()
    }

    #[test]
    fn objective_single_sample() {
        // max{0, 1-1} + (2/2) * 1 = 1.0
        let p = one_sample();
        assert_eq!(p.objective(&[1.0, 0.0]), 1.0);
    }

    #[test]
    fn hinge_selector_with_kink_at_zero() {
        let a = DenseMatrix::identity(3);
        let p = LinearSvm::new(a, &[1.0, 1.0, 1.0], 0.5).unwrap();
        // Force s = (0, 0.5, -1) via x = (1, 0.5, 2).
        let state = p.init_state(Vector::new(vec![1.0, 0.5, 2.0]).unwrap());
        assert_eq!(state.s, vec![0.0, 0.5, -1.0]);
        let zeta = p.outer_subgradient(&state);
        assert_eq!(zeta, vec![0.0, 1.0 / 3.0, 0.0]);
    }

    #[test]
    fn rejects_bad_labels() {
        let a = DenseMatrix::identity(2);
        assert!(LinearSvm::new(a, &[1.0, 0.5], 1.0).is_err());
    }
}
