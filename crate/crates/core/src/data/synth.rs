//! Synthetic problem instances.
//!
//! Everything is generated from the pinned [`RngState`] stream so a seed
//! fully determines the dataset. Draw order is part of the format:
//!
//! * Regression: matrix entries in column-major storage order, then the
//!   sparse signal (support indices by partial Fisher-Yates, then values),
//!   then outliers (locations, then values).
//! * Phase retrieval: the design's sign diagonals row-block by row-block,
//!   then outlier locations, then outlier values.
//!
//! "N(0, 1000)" outliers follow the variance convention: standard deviation
//! `sqrt(1000)`.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::RngState;
use crate::vector::Vector;

const OUTLIER_SIGMA: f64 = 31.622776601683793; // sqrt(1000)

/// `round(p_fail * n)` with round-half-up.
pub fn outlier_count(p_fail: f64, n: usize) -> usize {
    (p_fail * n as f64 + 0.5).floor() as usize
}

#[derive(Debug, Clone, Copy)]
pub struct MEstimatorGenConfig {
    pub n: usize,
    pub d: usize,
    pub sparsity: usize,
    pub p_fail: f64,
    pub seed: u64,
}

impl MEstimatorGenConfig {
    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d == 0 {
            return Err(Error::InvalidConfig("n and d must be positive".into()));
        }
        if self.sparsity > self.d {
            return Err(Error::InvalidConfig(format!(
                "sparsity {} exceeds dimension {}",
                self.sparsity, self.d
            )));
        }
        if !(0.0..1.0).contains(&self.p_fail) {
            return Err(Error::InvalidConfig(format!("p_fail must be in [0, 1), got {}", self.p_fail)));
        }
        Ok(())
    }
}

/// Generated regression instance: `rhs = matrix * x_star + outliers`.
#[derive(Debug, Clone)]
pub struct GeneratedRegression {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub x_star: Vector,
}

/// Standard-normal design, sparse standard-normal signal, and heavy
/// `N(0, 1000)` corruption on `round(p_fail * n)` distinct rows.
pub fn generate_mestimator_data(cfg: &MEstimatorGenConfig) -> Result<GeneratedRegression> {
    cfg.validate()?;
    let mut rng = RngState::new(cfg.seed);
    let a = DenseMatrix::from_fn(cfg.n, cfg.d, |_, _| rng.normal());

    let mut x_star = vec![0.0; cfg.d];
    let support = rng.distinct_indices(cfg.d, cfg.sparsity);
    for idx in support {
        x_star[idx] = rng.normal();
    }

    let mut rhs = a.apply(&x_star);
    let locations = rng.distinct_indices(cfg.n, outlier_count(cfg.p_fail, cfg.n));
    for loc in locations {
        rhs[loc] += rng.normal_scaled(OUTLIER_SIGMA);
    }

    Ok(GeneratedRegression { matrix: a, rhs, x_star: Vector::new(x_star)? })
}

/// Symmetric normalized Sylvester-Hadamard matrix `H` with `H H = I`.
///
/// Entry `(i, j)` is `(-1)^{popcount(i & j)} / sqrt(d)`; `d` must be a
/// power of two.
pub fn hadamard_matrix(d: usize) -> Result<DenseMatrix> {
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::InvalidConfig(format!("hadamard dimension must be a power of two, got {d}")));
    }
    let scale = 1.0 / (d as f64).sqrt();
    Ok(DenseMatrix::from_fn(d, d, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            scale
        } else {
            -scale
        }
    }))
}

/// Structured sensing design: `m` random sign diagonals composed with the
/// normalized Hadamard matrix, stacked into an `(m d) x d` matrix.
#[derive(Debug, Clone)]
pub struct HadamardDesign {
    dim: usize,
    signs: Vec<Vec<f64>>,
}

impl HadamardDesign {
    pub fn new(dim: usize, m: usize, rng: &mut RngState) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("m must be >= 1".into()));
        }
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "hadamard dimension must be a power of two, got {dim}"
            )));
        }
        let signs = (0..m)
            .map(|_| (0..dim).map(|_| if rng.uniform_index(2) == 0 { 1.0 } else { -1.0 }).collect())
            .collect();
        Ok(Self { dim, signs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_repeats(&self) -> usize {
        self.signs.len()
    }

    pub fn num_rows(&self) -> usize {
        self.dim * self.signs.len()
    }

    /// The stacked sensing matrix: block `j` is `H S_j` (modulate by the
    /// sign diagonal, then transform), so entry `(j d + l, c)` equals
    /// `H[l, c] * signs[j][c]`. Modulating before the transform is what
    /// makes the squared measurements differ across the `m` blocks; with
    /// the signs applied after the transform they would cancel inside the
    /// square and every block would repeat the same `d` magnitudes.
    pub fn sensing_matrix(&self) -> DenseMatrix {
        let h = hadamard_matrix(self.dim).expect("validated dimension");
        DenseMatrix::from_fn(self.num_rows(), self.dim, |i, col| {
            let block = i / self.dim;
            let local = i % self.dim;
            self.signs[block][col] * h.get(local, col)
        })
    }
}

/// Generated phase retrieval instance.
#[derive(Debug, Clone)]
pub struct GeneratedPhase {
    pub matrix: DenseMatrix,
    pub b_sq: Vec<f64>,
    pub x_star: Vector,
}

/// Squared measurements `(a_i^T x*)^2`, with `round(p_fail * n)` entries
/// replaced verbatim by `N(0, 1000)` draws. Such a draw can be negative;
/// `clip_outliers` optionally floors it at zero.
pub fn generate_pr_data(
    design: &HadamardDesign,
    x_star: &Vector,
    p_fail: f64,
    rng: &mut RngState,
    clip_outliers: bool,
) -> Result<GeneratedPhase> {
    if x_star.len() != design.dim() {
        return Err(Error::DimensionMismatch { expected: design.dim(), got: x_star.len() });
    }
    if !(0.0..1.0).contains(&p_fail) {
        return Err(Error::InvalidConfig(format!("p_fail must be in [0, 1), got {p_fail}")));
    }
    let a = design.sensing_matrix();
    let n = a.nrows();
    let ax = a.apply(x_star.as_slice());
    let mut b_sq: Vec<f64> = ax.iter().map(|v| v * v).collect();
    let locations = rng.distinct_indices(n, outlier_count(p_fail, n));
    for loc in locations {
        let draw = rng.normal_scaled(OUTLIER_SIGMA);
        b_sq[loc] = if clip_outliers { draw.max(0.0) } else { draw };
    }
    Ok(GeneratedPhase { matrix: a, b_sq, x_star: x_star.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outlier_count_rounds_half_up() {
        assert_eq!(outlier_count(0.2, 500), 100);
        assert_eq!(outlier_count(0.0, 100), 0);
        assert_eq!(outlier_count(0.25, 10), 3); // 2.5 rounds up
    }

    #[test]
    fn mestimator_instance_shape() {
        let cfg = MEstimatorGenConfig { n: 50, d: 100, sparsity: 20, p_fail: 0.2, seed: 7 };
        let data = generate_mestimator_data(&cfg).unwrap();
        assert_eq!(data.matrix.nrows(), 50);
        assert_eq!(data.matrix.ncols(), 100);
        let nonzeros = data.x_star.as_slice().iter().filter(|v| **v != 0.0).count();
        assert_eq!(nonzeros, 20);
        // Exactly round(0.2 * 50) = 10 rows deviate from the clean model.
        let clean = data.matrix.apply(data.x_star.as_slice());
        let outliers = data.rhs.iter().zip(&clean).filter(|(b, c)| *b != *c).count();
        assert_eq!(outliers, 10);
    }

    #[test]
    fn no_outliers_means_exact_model() {
        let cfg = MEstimatorGenConfig { n: 30, d: 10, sparsity: 5, p_fail: 0.0, seed: 3 };
        let data = generate_mestimator_data(&cfg).unwrap();
        let clean = data.matrix.apply(data.x_star.as_slice());
        assert_eq!(data.rhs, clean);
    }

    #[test]
    fn determinism_per_seed() {
        let cfg = MEstimatorGenConfig { n: 20, d: 30, sparsity: 4, p_fail: 0.1, seed: 11 };
        let a = generate_mestimator_data(&cfg).unwrap();
        let b = generate_mestimator_data(&cfg).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.rhs, b.rhs);
        assert_eq!(a.x_star, b.x_star);
    }

    #[test]
    fn sparsity_cannot_exceed_dimension() {
        let cfg = MEstimatorGenConfig { n: 5, d: 3, sparsity: 4, p_fail: 0.0, seed: 0 };
        assert!(generate_mestimator_data(&cfg).is_err());
    }

    #[test]
    fn hadamard_is_involutive() {
        for d in [2usize, 4, 8, 16, 32, 64, 128, 256] {
            let h = hadamard_matrix(d).unwrap();
            for col in 0..d {
                let mut e = vec![0.0; d];
                e[col] = 1.0;
                let hhe = h.apply(&h.apply(&e));
                for (i, v) in hhe.iter().enumerate() {
                    let want = if i == col { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-10, "d={d} ({i},{col}): {v}");
                }
            }
        }
        assert!(hadamard_matrix(3).is_err());
        assert!(hadamard_matrix(0).is_err());
    }

    #[test]
    fn identity_signs_give_unit_measurements() {
        // m = 1, S_1 = I, x* = sqrt(d) e_1: A = H and every b_i^2 = 1.
        let d = 8;
        let design = HadamardDesign { dim: d, signs: vec![vec![1.0; d]] };
        let mut x = vec![0.0; d];
        x[0] = (d as f64).sqrt();
        let x_star = Vector::new(x).unwrap();
        let mut rng = RngState::new(5);
        let data = generate_pr_data(&design, &x_star, 0.0, &mut rng, false).unwrap();
        let h = hadamard_matrix(d).unwrap();
        for i in 0..d {
            for j in 0..d {
                assert_eq!(data.matrix.get(i, j), h.get(i, j));
            }
            assert!((data.b_sq[i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clean_phase_instance_is_interpolated() {
        let mut rng = RngState::new(13);
        let design = HadamardDesign::new(16, 3, &mut rng).unwrap();
        let x_star = Vector::new((0..16).map(|i| (i as f64 * 0.37).sin()).collect()).unwrap();
        let data = generate_pr_data(&design, &x_star, 0.0, &mut rng, false).unwrap();
        let p = crate::problems::PhaseRetrieval::new(data.matrix, data.b_sq).unwrap();
        use crate::oracle::CompositeOracle;
        assert!(p.objective(x_star.as_slice()) < 1e-12);
    }
}
