//! The application problem families, each implementing [`CompositeOracle`]
//! with an incrementally maintained residual and closed-form block
//! subgradients.

mod mestimator;
mod phase_retrieval;
mod svm;

pub use mestimator::{Loss, MEstimator};
pub use phase_retrieval::PhaseRetrieval;
pub use svm::LinearSvm;
