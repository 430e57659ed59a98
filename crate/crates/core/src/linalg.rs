//! Spectral helpers: power iteration for the largest singular value and
//! Cholesky-based inverse iteration for the smallest Gram eigenvalue.
//!
//! These feed weak-convexity moduli and error-bound constants, so they are
//! reported with a fixed tolerance rather than driven to machine precision.

use crate::matrix::DenseMatrix;
use crate::rng::RngState;

/// Default relative tolerance used by the modulus calculators.
pub const SPECTRAL_TOL: f64 = 1e-6;
/// Iteration cap for both power iterations.
pub const SPECTRAL_MAX_ITER: usize = 500;

/// Largest singular value of `a` by power iteration on `A^T A`.
///
/// Deterministic: the start vector comes from a fixed-seed generator.
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    let d = a.ncols();
    if d == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let mut rng = RngState::new(0x5eed_0001);
    let mut v: Vec<f64> = (0..d).map(|_| rng.next_f64() - 0.5).collect();
    normalize(&mut v);
    let mut sigma_sq = 0.0f64;
    for _ in 0..SPECTRAL_MAX_ITER {
        let av = a.apply(&v);
        let mut w = a.t_apply(&av);
        let next = norm(&w);
        if next == 0.0 {
            return 0.0;
        }
        for x in w.iter_mut() {
            *x /= next;
        }
        let rel = (next - sigma_sq).abs() / next.max(f64::MIN_POSITIVE);
        v = w;
        sigma_sq = next;
        if rel < SPECTRAL_TOL {
            break;
        }
    }
    sigma_sq.sqrt()
}

/// Smallest eigenvalue of the Gram matrix `A^T A` via Cholesky inverse
/// iteration. Returns `None` when the factorization fails (rank deficiency).
pub fn gram_min_eigenvalue(a: &DenseMatrix) -> Option<f64> {
    let q = a.gram();
    let chol = cholesky(&q)?;
    let d = q.ncols();
    let mut rng = RngState::new(0x5eed_0002);
    let mut v: Vec<f64> = (0..d).map(|_| rng.next_f64() - 0.5).collect();
    normalize(&mut v);
    let mut lambda = 0.0f64;
    for _ in 0..SPECTRAL_MAX_ITER {
        let mut w = chol_solve(&chol, &v);
        let nw = norm(&w);
        if nw == 0.0 {
            return None;
        }
        for x in w.iter_mut() {
            *x /= nw;
        }
        // Rayleigh quotient of Q at the current direction.
        let qw = matvec(&q, &w);
        let next = w.iter().zip(&qw).map(|(x, y)| x * y).sum::<f64>();
        let rel = (next - lambda).abs() / next.abs().max(f64::MIN_POSITIVE);
        v = w;
        lambda = next;
        if rel < SPECTRAL_TOL {
            break;
        }
    }
    Some(lambda)
}

fn matvec(m: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    m.apply(x)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    } else if let Some(first) = v.first_mut() {
        *first = 1.0;
    }
}

/// Least-distance projection of `x` onto the affine set `{y : M y = c}`
/// where the rows of `M` are `normals` and `c` the `targets`:
/// `y = x - M^T (M M^T)^{-1} (M x - c)`.
///
/// Duplicate or near-parallel normals are common (repeated kink surfaces in
/// structured designs), so constraints are added greedily and any that make
/// the Gram factorization ill-conditioned are dropped; the projection stays
/// exact on the kept subset. `None` when nothing can be kept.
pub fn project_onto_affine(x: &[f64], normals: &[Vec<f64>], targets: &[f64]) -> Option<Vec<f64>> {
    if normals.is_empty() {
        return Some(x.to_vec());
    }
    let mut kept: Vec<usize> = Vec::new();
    for cand in 0..normals.len() {
        let mut trial: Vec<usize> = kept.clone();
        trial.push(cand);
        let gram = DenseMatrix::from_fn(trial.len(), trial.len(), |i, j| {
            normals[trial[i]].iter().zip(&normals[trial[j]]).map(|(a, b)| a * b).sum()
        });
        if cholesky_conditioned(&gram).is_some() {
            kept = trial;
        }
    }
    if kept.is_empty() {
        return None;
    }
    let gram = DenseMatrix::from_fn(kept.len(), kept.len(), |i, j| {
        normals[kept[i]].iter().zip(&normals[kept[j]]).map(|(a, b)| a * b).sum()
    });
    let chol = cholesky_conditioned(&gram)?;
    let violation: Vec<f64> = kept
        .iter()
        .map(|&i| normals[i].iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - targets[i])
        .collect();
    let z = chol_solve(&chol, &violation);
    let mut y = x.to_vec();
    for (&i, zi) in kept.iter().zip(z) {
        for (yj, aj) in y.iter_mut().zip(&normals[i]) {
            *yj -= zi * aj;
        }
    }
    Some(y)
}

/// Cholesky with a relative pivot floor, rejecting near-singular inputs.
fn cholesky_conditioned(q: &DenseMatrix) -> Option<DenseMatrix> {
    let scale = (0..q.ncols()).map(|j| q.get(j, j)).fold(0.0f64, f64::max);
    if scale <= 0.0 {
        return None;
    }
    let d = q.ncols();
    let mut l = DenseMatrix::zeros(d, d);
    for j in 0..d {
        let mut diag = q.get(j, j);
        for k in 0..j {
            diag -= l.get(j, k) * l.get(j, k);
        }
        if diag <= 1e-10 * scale {
            return None;
        }
        let diag = diag.sqrt();
        l.set(j, j, diag);
        for i in j + 1..d {
            let mut v = q.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / diag);
        }
    }
    Some(l)
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
/// stored column-major. `None` if a pivot drops below a small floor.
fn cholesky(q: &DenseMatrix) -> Option<DenseMatrix> {
    let d = q.ncols();
    let mut l = DenseMatrix::zeros(d, d);
    for j in 0..d {
        let mut diag = q.get(j, j);
        for k in 0..j {
            diag -= l.get(j, k) * l.get(j, k);
        }
        if diag <= 1e-300 {
            return None;
        }
        let diag = diag.sqrt();
        l.set(j, j, diag);
        for i in j + 1..d {
            let mut v = q.get(i, j);
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, v / diag);
        }
    }
    Some(l)
}

/// Solves `L L^T x = b` by forward then backward substitution.
fn chol_solve(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let d = l.ncols();
    let mut y = vec![0.0; d];
    for i in 0..d {
        let mut v = b[i];
        for k in 0..i {
            v -= l.get(i, k) * y[k];
        }
        y[i] = v / l.get(i, i);
    }
    let mut x = vec![0.0; d];
    for i in (0..d).rev() {
        let mut v = y[i];
        for k in i + 1..d {
            v -= l.get(k, i) * x[k];
        }
        x[i] = v / l.get(i, i);
    }
    x
}
