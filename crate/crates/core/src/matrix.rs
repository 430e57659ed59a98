//! Dense column-major matrix.
//!
//! Column-major storage makes a contiguous column block `A_i` available to
//! the coordinate operations without gathering, which is what keeps a block
//! iteration at `O(n * d_i)` flops touching `O(n * d_i)` memory.

use crate::error::{Error, Result};
use std::ops::Range;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    /// Column-major: entry (i, j) lives at `data[j * rows + i]`.
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    /// Builds from a row-major slice of length `rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(Self::from_fn(rows, cols, |i, j| entries[i * cols + j]))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    /// Contiguous view of column `j`.
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Row `i` gathered into a fresh vector.
    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.cols).map(|j| self.get(i, j) * x[j]).sum()
    }

    pub fn row_norm(&self, i: usize) -> f64 {
        (0..self.cols).map(|j| self.get(i, j).powi(2)).sum::<f64>().sqrt()
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        self.block_apply_add(0..self.cols, x, 1.0, &mut out);
        out
    }

    /// `A^T v`.
    pub fn t_apply(&self, v: &[f64]) -> Vec<f64> {
        self.block_t_apply(0..self.cols, v)
    }

    /// `A_I^T v` for a contiguous column range `I`.
    pub fn block_t_apply(&self, cols: Range<usize>, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        cols.map(|j| {
            let col = self.col(j);
            col.iter().zip(v).map(|(a, b)| a * b).sum()
        })
        .collect()
    }

    /// `out += scale * A_I * delta` for a contiguous column range `I`.
    ///
    /// `delta` is indexed relative to the start of the range.
    pub fn block_apply_add(&self, cols: Range<usize>, delta: &[f64], scale: f64, out: &mut [f64]) {
        debug_assert_eq!(delta.len(), cols.len());
        debug_assert_eq!(out.len(), self.rows);
        for (local, j) in cols.enumerate() {
            let w = scale * delta[local];
            if w == 0.0 {
                continue;
            }
            let col = self.col(j);
            for (o, a) in out.iter_mut().zip(col) {
                *o += w * a;
            }
        }
    }

    /// Gram matrix `A^T A` (column-major, `cols x cols`).
    pub fn gram(&self) -> DenseMatrix {
        let d = self.cols;
        let mut g = DenseMatrix::zeros(d, d);
        for j in 0..d {
            for i in 0..=j {
                let v = dotcols(self.col(i), self.col(j));
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        g
    }
}

fn dotcols(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
