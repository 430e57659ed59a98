//! Shared fixtures for the criterion benchmarks.

use rcs_core::{DenseMatrix, Loss, MEstimator, PhaseRetrieval, RngState, Vector};

pub fn regression_instance(n: usize, d: usize) -> MEstimator {
    let mut rng = RngState::new(42);
    let a = DenseMatrix::from_fn(n, d, |_, _| rng.normal());
    let b = (0..n).map(|_| rng.normal()).collect();
    MEstimator::new(a, b, 0.01, Loss::L1).unwrap()
}

pub fn phase_instance(d: usize, m: usize) -> PhaseRetrieval {
    let mut rng = RngState::new(43);
    let design = rcs_core::data::HadamardDesign::new(d, m, &mut rng).unwrap();
    let x_star = Vector::new((0..d).map(|_| rng.normal()).collect()).unwrap();
    let gen = rcs_core::data::generate_pr_data(&design, &x_star, 0.1, &mut rng, false).unwrap();
    PhaseRetrieval::new(gen.matrix, gen.b_sq).unwrap()
}
