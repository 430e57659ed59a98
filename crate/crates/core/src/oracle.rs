//! The problem-facing oracle contract.
//!
//! Every problem family exposes the composite objective `f(x) = h(Phi(x))`
//! through the same capability record: an objective, a fixed selection of an
//! outer subgradient `zeta` in the subdifferential of `h` at `Phi(x)`, and a
//! block application of the Jacobian transpose. Fixing `zeta` once per
//! iterate is what makes per-block slices of `grad Phi(x)^T zeta` combine
//! into a complete subgradient of `f`.
//!
//! A cached residual vector `s` (problem-specific; see each implementation)
//! lets a block call cost `O(n * d_i)` instead of a full pass.

use crate::partition::BlockPartition;
use crate::vector::Vector;
use std::ops::Range;

/// Mutable per-run state: the current iterate and its cached residual.
#[derive(Debug, Clone)]
pub struct ResidualState {
    pub x: Vector,
    /// Cached n-vector; its defining formula is fixed by each problem.
    pub s: Vec<f64>,
}

/// Weak-convexity modulus together with how it was derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakConvexityInfo {
    pub rho: f64,
    pub provenance: WeakConvexityCase,
}

/// Which composition case produced the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakConvexityCase {
    /// The objective is convex; the modulus is zero.
    Convex,
    /// Lipschitz outer function with Lipschitz inner Jacobian.
    LipschitzOuter,
    /// Weakly convex outer function composed with a smooth inner map.
    WeaklyConvexOuter,
}

/// Constants of the linear subgradient growth bound
/// `||r|| <= growth * ||x|| + offset` for every selected subgradient `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBoundConstants {
    pub growth: f64,
    pub offset: f64,
}

/// Membership tolerance for kink detection when parameterizing the
/// subdifferential; ties go into the box (the enlarging choice).
pub const KINK_TOL: f64 = 1e-9;

/// Box parameterization of the subdifferential at a point: the set
/// `{ fixed + sum_j xi_j * columns[j] : xi_j in [lows[j], highs[j]] }`.
///
/// `fixed` is the selected subgradient (kinks select the interval point
/// that the zero coefficient reproduces), so the box always contains it.
#[derive(Debug, Clone)]
pub struct SubdifferentialBox {
    pub fixed: Vec<f64>,
    pub columns: Vec<Vec<f64>>,
    pub lows: Vec<f64>,
    pub highs: Vec<f64>,
}

pub trait CompositeOracle {
    /// Dimension `d` of the decision variable.
    fn dim(&self) -> usize;

    /// Length `n` of the residual vector.
    fn num_residuals(&self) -> usize;

    /// Exact objective value, computed from scratch.
    fn objective(&self, x: &[f64]) -> f64;

    /// Objective computed from the cached residual (cheap path).
    fn objective_from_state(&self, state: &ResidualState) -> f64;

    /// Builds the residual state at `x0` by one full pass over the data.
    fn init_state(&self, x0: Vector) -> ResidualState;

    /// The selected outer subgradient `zeta` as an n-vector of residual
    /// weights. The selection rule is deterministic with `sign(0) = 0` at
    /// every kink; see each problem for the exact formula.
    fn outer_subgradient(&self, state: &ResidualState) -> Vec<f64>;

    /// Applies the block Jacobian transpose: returns the block subgradient
    /// `r_I = grad_I Phi(x)^T zeta` for a contiguous coordinate range `I`,
    /// including any separable penalty contribution on that range.
    /// Cost is `O(n * |I|)`.
    fn block_jacobian_transpose_apply(
        &self,
        state: &ResidualState,
        range: Range<usize>,
        zeta: &[f64],
    ) -> Vec<f64>;

    /// Writes `new_block` into `x` over `range` and patches the cached
    /// residual with the corresponding rank-`|I|` correction.
    fn state_update(&self, state: &mut ResidualState, range: Range<usize>, new_block: &[f64]);

    fn weak_convexity_modulus(&self) -> WeakConvexityInfo;

    fn linear_bound_constants(&self) -> LinearBoundConstants;

    /// Block subgradient for block `i` of a partition.
    fn block_subgradient(
        &self,
        state: &ResidualState,
        block: usize,
        partition: &BlockPartition,
    ) -> Vec<f64> {
        let zeta = self.outer_subgradient(state);
        self.block_jacobian_transpose_apply(state, partition.range(block), &zeta)
    }

    /// Complete subgradient at the current iterate (one `zeta`, all blocks).
    fn full_subgradient(&self, state: &ResidualState) -> Vec<f64> {
        let zeta = self.outer_subgradient(state);
        self.block_jacobian_transpose_apply(state, 0..self.dim(), &zeta)
    }

    /// Box parameterization of the full subdifferential at the state's
    /// iterate, for problems that expose their kink structure. Minimal-norm
    /// searches and suboptimality certificates use it; `None` falls back to
    /// the selected subgradient.
    fn subdifferential_box(&self, state: &ResidualState) -> Option<SubdifferentialBox> {
        let _ = state;
        None
    }

    /// Least-distance move of `x` onto the kink surfaces within `tol` of it,
    /// when the problem can construct one. Subgradient iterates hover near
    /// kinks without landing on them; certificates evaluated at the snapped
    /// point see the full subdifferential box.
    fn snap_to_kinks(&self, x: &[f64], tol: f64) -> Option<Vec<f64>> {
        let _ = (x, tol);
        None
    }
}
