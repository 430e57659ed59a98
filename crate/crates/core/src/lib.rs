//! Nonsmooth composite optimization toolkit built around a randomized
//! coordinate subgradient method.
//!
//! The objective class is `f(x) = h(Phi(x))` with a nonsmooth outer `h` and
//! a smooth inner map `Phi`. Because the chain rule separates the smooth
//! Jacobian from the outer subdifferential, fixing one outer subgradient per
//! iterate lets single coordinate blocks be updated with consistent
//! subgradient slices. The crate provides:
//!
//! * the randomized block solver and its full-subgradient baseline
//!   ([`solver`]), with bit-reproducible traces;
//! * three problem families (robust regression with `l1` or MCP loss,
//!   hinge-loss SVM, real-valued robust phase retrieval) behind one oracle
//!   contract ([`oracle`], [`problems`]);
//! * step-size schedules and their summability checks ([`schedule`]);
//! * Moreau-envelope diagnostics, minimal-norm subgradients, and
//!   theory-constant calculators with callable rate envelopes ([`moreau`]);
//! * synthetic data generators, a binary dataset container, and a libsvm
//!   reader ([`data`]).

// Triangular factorizations read clearest with explicit indices, and the
// negated comparisons reject NaN parameters on purpose.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod moreau;
pub mod oracle;
pub mod partition;
pub mod problems;
pub mod reference;
pub mod rng;
pub mod schedule;
pub mod solver;
pub mod vector;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use moreau::{
    critical_set_bound_pr, envelope_gradient_norm, min_norm_in_box, min_norm_subgradient_pr,
    prox_estimate, subregularity_probe, theory_bounds, MoreauConfig, ProxResult,
    SubregularityRecord, TheoryBounds, TheoryInputs,
};
pub use oracle::{
    CompositeOracle, LinearBoundConstants, ResidualState, SubdifferentialBox, WeakConvexityCase,
    WeakConvexityInfo, KINK_TOL,
};
pub use partition::{aggregate_blocks, BlockPartition};
pub use problems::{LinearSvm, Loss, MEstimator, PhaseRetrieval};
pub use reference::{compute_reference, ReferenceProvenance, ReferenceSolution};
pub use rng::RngState;
pub use schedule::{
    horizon_step, quadratic_growth_step, sqrt_log_step, validate_summability, StepSchedule,
    SummabilityReport,
};
pub use solver::{
    plain_average_iterate, rcs_run, subgrad_run, weighted_average_iterate, IterationRecord,
    ProbeSnapshot, SolverConfig, SolverTrace,
};
pub use vector::Vector;
