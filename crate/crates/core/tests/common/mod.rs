//! Shared fixtures: random instances per problem family and an independent
//! dense-subgradient oracle that works from raw row-major data, bypassing
//! the residual cache and the column-block code paths entirely.

use rcs_core::{
    CompositeOracle, DenseMatrix, LinearSvm, Loss, MEstimator, PhaseRetrieval, RngState, Vector,
};

pub fn sign(z: f64) -> f64 {
    if z > 0.0 {
        1.0
    } else if z < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    MestL1 { p2: f64 },
    MestMcp { p1: f64, p2: f64 },
    Svm { p: f64 },
    Pr,
}

pub struct TestInstance {
    pub name: &'static str,
    pub problem: Box<dyn CompositeOracle + Send + Sync>,
    pub raw: RawData,
}

/// Row-major copy of the instance data for the independent oracle.
pub struct RawData {
    pub rows: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub kind: Kind,
}

impl RawData {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.rows[0].len()
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let dot: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
                match self.kind {
                    Kind::MestL1 { .. } | Kind::MestMcp { .. } => dot - self.b[i],
                    Kind::Svm { .. } => 1.0 - dot,
                    Kind::Pr => dot,
                }
            })
            .collect()
    }

    /// The complete subgradient under the same selection rules as the
    /// implementation, computed densely from `x` alone.
    pub fn dense_subgradient(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n() as f64;
        let d = self.d();
        let s = self.residual(x);
        let weights: Vec<f64> = match self.kind {
            Kind::MestL1 { .. } => s.iter().map(|&z| sign(z) / n).collect(),
            Kind::MestMcp { p1, .. } => s
                .iter()
                .map(|&z| if z.abs() <= p1 { (sign(z) - z / p1) / n } else { 0.0 })
                .collect(),
            Kind::Svm { .. } => s.iter().map(|&z| if z > 0.0 { 1.0 / n } else { 0.0 }).collect(),
            Kind::Pr => s
                .iter()
                .zip(&self.b)
                .map(|(&si, &bi)| 2.0 / n * si * sign(si * si - bi))
                .collect(),
        };
        (0..d)
            .map(|j| {
                let data_part: f64 =
                    self.rows.iter().zip(&weights).map(|(row, w)| row[j] * w).sum();
                match self.kind {
                    Kind::MestL1 { p2 } | Kind::MestMcp { p2, .. } => {
                        data_part + p2 * sign(x[j])
                    }
                    Kind::Svm { p } => -data_part + p * x[j],
                    Kind::Pr => data_part,
                }
            })
            .collect()
    }
}

pub fn random_matrix(rng: &mut RngState, n: usize, d: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, d, |_, _| rng.normal())
}

pub fn random_vec(rng: &mut RngState, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.normal_scaled(scale)).collect()
}

pub fn random_vector(rng: &mut RngState, d: usize, scale: f64) -> Vector {
    Vector::new(random_vec(rng, d, scale)).unwrap()
}

fn rows_of(a: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| a.row(i)).collect()
}

/// Builds a random instance of each family at the given shape.
pub fn make_instance(kind: Kind, rng: &mut RngState, n: usize, d: usize) -> TestInstance {
    let a = random_matrix(rng, n, d);
    match kind {
        Kind::MestL1 { p2 } => {
            let b = random_vec(rng, n, 1.0);
            let raw = RawData { rows: rows_of(&a), b: b.clone(), kind };
            TestInstance {
                name: "mestimator-l1",
                problem: Box::new(MEstimator::new(a, b, p2, Loss::L1).unwrap()),
                raw,
            }
        }
        Kind::MestMcp { p1, p2 } => {
            let b = random_vec(rng, n, 1.0);
            let raw = RawData { rows: rows_of(&a), b: b.clone(), kind };
            TestInstance {
                name: "mestimator-mcp",
                problem: Box::new(MEstimator::new(a, b, p2, Loss::Mcp { p1 }).unwrap()),
                raw,
            }
        }
        Kind::Svm { p } => {
            let labels: Vec<f64> =
                (0..n).map(|_| if rng.uniform_index(2) == 0 { 1.0 } else { -1.0 }).collect();
            let problem = LinearSvm::new(a, &labels, p).unwrap();
            let raw = RawData {
                rows: rows_of(problem.signed_matrix()),
                b: labels,
                kind,
            };
            TestInstance { name: "svm", problem: Box::new(problem), raw }
        }
        Kind::Pr => {
            let x_star = random_vec(rng, d, 1.0);
            let mut b_sq: Vec<f64> =
                (0..n).map(|i| a.row_dot(i, &x_star).powi(2)).collect();
            // A few corrupted measurements keep both signs of the gap active.
            for i in (0..n).step_by(4) {
                b_sq[i] = rng.normal_scaled(3.0).abs();
            }
            let raw = RawData { rows: rows_of(&a), b: b_sq.clone(), kind };
            TestInstance {
                name: "phase-retrieval",
                problem: Box::new(PhaseRetrieval::new(a, b_sq).unwrap()),
                raw,
            }
        }
    }
}

pub fn default_kinds() -> Vec<Kind> {
    vec![
        Kind::MestL1 { p2: 0.05 },
        Kind::MestMcp { p1: 1.5, p2: 0.05 },
        Kind::Svm { p: 0.1 },
        Kind::Pr,
    ]
}

/// Relative infinity-norm deviation between two vectors.
pub fn rel_inf_err(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0f64, f64::max)
        / scale
}
