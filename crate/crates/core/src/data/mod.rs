//! Synthetic data generation and dataset I/O.

mod container;
mod libsvm;
mod pgm;
mod synth;

pub use container::{read_dataset, read_meta, write_dataset, write_meta, Dataset, DatasetMeta};
pub use libsvm::read_libsvm;
pub use pgm::{read_pgm, write_pgm};
pub use synth::{
    generate_mestimator_data, generate_pr_data, hadamard_matrix, outlier_count, HadamardDesign,
    MEstimatorGenConfig,
};
