//! Robust M-estimation: `f(x) = loss(Ax - b) + p2 * ||x||_1` with either the
//! mean absolute loss or the MCP loss.
//!
//! Residual cache: `s = Ax - b`, patched per block by
//! `s += A_I (x_I_new - x_I_old)`.

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::matrix::DenseMatrix;
use crate::oracle::{
    CompositeOracle, LinearBoundConstants, ResidualState, SubdifferentialBox, WeakConvexityCase,
    WeakConvexityInfo, KINK_TOL,
};
use crate::vector::{norm1, sign, Vector};
use std::ops::Range;
use std::sync::OnceLock;

/// Loss applied to the residual vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Loss {
    /// Mean absolute residual, `(1/n) * ||s||_1`.
    L1,
    /// Mean MCP loss with width `p1`:
    /// `phi(z) = |z| - z^2/(2 p1)` for `|z| <= p1`, else `p1 / 2`.
    Mcp { p1: f64 },
}

#[derive(Debug)]
pub struct MEstimator {
    a: DenseMatrix,
    b: Vec<f64>,
    /// `l1` penalty weight `p2`; zero disables the penalty, which is how the
    /// plain `|Ax - b|` test problems are built.
    penalty: f64,
    loss: Loss,
    sigma_max: OnceLock<f64>,
}

impl MEstimator {
    pub fn new(a: DenseMatrix, b: Vec<f64>, penalty: f64, loss: Loss) -> Result<Self> {
        if b.len() != a.nrows() {
            return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.len() });
        }
        if !(penalty >= 0.0) {
            return Err(Error::InvalidConfig(format!("penalty must be >= 0, got {penalty}")));
        }
        if let Loss::Mcp { p1 } = loss {
            if !(p1 > 0.0) {
                return Err(Error::InvalidConfig(format!("MCP width must be > 0, got {p1}")));
            }
        }
        Ok(Self { a, b, penalty, loss, sigma_max: OnceLock::new() })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn loss(&self) -> Loss {
        self.loss
    }

    fn sigma_max(&self) -> f64 {
        *self.sigma_max.get_or_init(|| spectral_norm(&self.a))
    }

    fn loss_value(&self, s: &[f64]) -> f64 {
        let n = self.b.len() as f64;
        match self.loss {
            Loss::L1 => norm1(s) / n,
            Loss::Mcp { p1 } => s.iter().map(|&z| mcp_value(z, p1)).sum::<f64>() / n,
        }
    }
}

fn mcp_value(z: f64, p1: f64) -> f64 {
    if z.abs() <= p1 {
        z.abs() - z * z / (2.0 * p1)
    } else {
        p1 / 2.0
    }
}

/// The fixed subgradient selection of the MCP loss,
/// `sign(z) - z/p1` on `|z| <= p1` and `0` outside.
fn mcp_subgradient(z: f64, p1: f64) -> f64 {
    if z.abs() <= p1 {
        sign(z) - z / p1
    } else {
        0.0
    }
}

impl CompositeOracle for MEstimator {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn num_residuals(&self) -> usize {
        self.a.nrows()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let mut s = self.a.apply(x);
        for (si, bi) in s.iter_mut().zip(&self.b) {
            *si -= bi;
        }
        self.loss_value(&s) + self.penalty * norm1(x)
    }

    fn objective_from_state(&self, state: &ResidualState) -> f64 {
        self.loss_value(&state.s) + self.penalty * norm1(state.x.as_slice())
    }

    fn init_state(&self, x0: Vector) -> ResidualState {
        let mut s = self.a.apply(x0.as_slice());
        for (si, bi) in s.iter_mut().zip(&self.b) {
            *si -= bi;
        }
        ResidualState { x: x0, s }
    }

    fn outer_subgradient(&self, state: &ResidualState) -> Vec<f64> {
        let n = self.b.len() as f64;
        match self.loss {
            Loss::L1 => state.s.iter().map(|&z| sign(z) / n).collect(),
            Loss::Mcp { p1 } => state.s.iter().map(|&z| mcp_subgradient(z, p1) / n).collect(),
        }
    }

    fn block_jacobian_transpose_apply(
        &self,
        state: &ResidualState,
        range: Range<usize>,
        zeta: &[f64],
    ) -> Vec<f64> {
        let mut r = self.a.block_t_apply(range.clone(), zeta);
        let x = state.x.as_slice();
        for (local, j) in range.enumerate() {
            r[local] += self.penalty * sign(x[j]);
        }
        r
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
        match self.loss {
            Loss::L1 => WeakConvexityInfo { rho: 0.0, provenance: WeakConvexityCase::Convex },
            Loss::Mcp { p1 } => {
                let n = self.num_residuals() as f64;
                let sigma = self.sigma_max();
                WeakConvexityInfo {
                    rho: sigma * sigma / (n * p1),
                    provenance: WeakConvexityCase::WeaklyConvexOuter,
                }
            }
        }
    }

    fn linear_bound_constants(&self) -> LinearBoundConstants {
        // The selected residual weights are bounded by 1/n entrywise for
        // both losses, so ||r|| <= sigma_max/sqrt(n) + p2 * sqrt(d).
        let n = self.num_residuals() as f64;
        let d = self.dim() as f64;
        LinearBoundConstants {
            growth: 0.0,
            offset: self.sigma_max() / n.sqrt() + self.penalty * d.sqrt(),
        }
    }

    fn subdifferential_box(&self, state: &ResidualState) -> Option<SubdifferentialBox> {
        // Kinks: residuals at zero contribute (1/n) a_i [-1, 1] for either
        // loss, penalized coordinates at zero contribute p2 e_j [-1, 1].
        // The fixed part zeroes kink weights so the box is not shifted by
        // the selection made at near-kink values.
        let n = self.num_residuals() as f64;
        let d = self.dim();
        let mut columns = Vec::new();
        let mut weights = vec![0.0; self.num_residuals()];
        for (i, &si) in state.s.iter().enumerate() {
            if si.abs() <= KINK_TOL {
                let row = self.a.row(i);
                columns.push(row.into_iter().map(|v| v / n).collect());
            } else {
                weights[i] = match self.loss {
                    Loss::L1 => sign(si) / n,
                    Loss::Mcp { p1 } => mcp_subgradient(si, p1) / n,
                };
            }
        }
        let mut fixed = self.a.t_apply(&weights);
        if self.penalty > 0.0 {
            for (j, &xj) in state.x.as_slice().iter().enumerate() {
                if xj.abs() <= KINK_TOL {
                    let mut e = vec![0.0; d];
                    e[j] = self.penalty;
                    columns.push(e);
                } else {
                    fixed[j] += self.penalty * sign(xj);
                }
            }
        }
        let count = columns.len();
        Some(SubdifferentialBox { fixed, columns, lows: vec![-1.0; count], highs: vec![1.0; count] })
    }

    fn snap_to_kinks(&self, x: &[f64], tol: f64) -> Option<Vec<f64>> {
        let s = {
            let mut s = self.a.apply(x);
            for (si, bi) in s.iter_mut().zip(&self.b) {
                *si -= bi;
            }
            s
        };
        let mut normals = Vec::new();
        let mut targets = Vec::new();
        for (i, &si) in s.iter().enumerate() {
            if si.abs() <= tol {
                normals.push(self.a.row(i));
                targets.push(self.b[i]);
            }
        }
        if self.penalty > 0.0 {
            for (j, &xj) in x.iter().enumerate() {
                if xj.abs() <= tol {
                    let mut e = vec![0.0; x.len()];
                    e[j] = 1.0;
                    normals.push(e);
                    targets.push(0.0);
                }
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
    fn objective_at_joint_minimizer() {
        let p = MEstimator::new(DenseMatrix::identity(1), vec![0.0], 1.0, Loss::L1).unwrap();
        assert_eq!(p.objective(&[0.0]), 0.0);
    }

    #[test]
    fn block_subgradient_closed_form() {
        // A = I_2, b = 0, p2 = 0.5, x = (1, -2): block 0 gives
        // (1/2) sign(1) + 0.5 sign(1) = 1.0.
        let p = MEstimator::new(DenseMatrix::identity(2), vec![0.0, 0.0], 0.5, Loss::L1).unwrap();
        let state = p.init_state(Vector::new(vec![1.0, -2.0]).unwrap());
        let partition = BlockPartition::new(2, 2).unwrap();
        let r0 = p.block_subgradient(&state, 0, &partition);
        assert_eq!(r0, vec![1.0]);
    }

    #[test]
    fn mcp_flat_region_boundary() {
        // At z = p1 the selection gives sign(p1) - p1/p1 = 0.
        assert_eq!(mcp_subgradient(2.0, 2.0), 0.0);
        assert_eq!(mcp_subgradient(2.5, 2.0), 0.0);
        assert_eq!(mcp_subgradient(0.0, 2.0), 0.0);
        assert_eq!(mcp_value(2.0, 2.0), 1.0);
        assert_eq!(mcp_value(5.0, 2.0), 1.0);
    }

    #[test]
    fn zero_delta_keeps_residual() {
        let p = MEstimator::new(DenseMatrix::identity(2), vec![1.0, 2.0], 0.1, Loss::L1).unwrap();
        let mut state = p.init_state(Vector::new(vec![3.0, 4.0]).unwrap());
        let before = state.s.clone();
        let old = vec![state.x[0]];
        p.state_update(&mut state, 0..1, &old);
        assert_eq!(state.s, before);
    }
}
