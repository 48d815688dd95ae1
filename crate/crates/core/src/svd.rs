//! Truncated SVD of small dense matrices by one-sided Jacobi rotations.
//!
//! The embedding matrices have one column per sample and one row per node
//! touched by any sample, so they are tall and thin. Jacobi orthogonalizes
//! the columns of the narrower orientation until every pair is orthogonal to
//! working precision.

use crate::error::{Error, Result};

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut m = DenseMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::InvalidParameter(format!("column {j} has length {}, expected {rows}", col.len())));
            }
            m.column_mut(j).copy_from_slice(col);
        }
        Ok(m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
}

/// Leading singular triplets: `u[k]` has length `rows`, `v[k]` length `cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub singular_values: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 80;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Rotates the columns of `a` until they are mutually orthogonal and
/// returns the accumulated right rotation `v` (square, `a.cols` wide).
fn orthogonalize(a: &mut DenseMatrix) -> DenseMatrix {
    let n = a.cols;
    let mut v = DenseMatrix::zeros(n, n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(a.column(p), a.column(p));
                let beta = dot(a.column(q), a.column(q));
                let gamma = dot(a.column(p), a.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    v
}

fn rotate(m: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.rows {
        let (x, y) = (m.get(i, p), m.get(i, q));
        m.set(i, p, c * x - s * y);
        m.set(i, q, s * x + c * y);
    }
}

/// Extends `basis` with unit vectors orthogonal to it, drawn from the
/// standard basis, until it holds `want` vectors or the space is exhausted.
fn complete(basis: &mut Vec<Vec<f64>>, dim: usize, want: usize) {
    for e in 0..dim {
        if basis.len() >= want {
            return;
        }
        let mut x = vec![0.0; dim];
        x[e] = 1.0;
        for _ in 0..2 {
            for b in basis.iter() {
                let proj = dot(&x, b);
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= proj * bi);
            }
        }
        let len = norm(&x);
        if len > 1e-6 {
            x.iter_mut().for_each(|xi| *xi /= len);
            basis.push(x);
        }
    }
}

/// Flips each pair so the left vector has a positive sum, or a positive
/// first nonzero entry when the sum vanishes.
fn fix_sign(u: &mut [f64], v: &mut [f64]) {
    let sum: f64 = u.iter().sum();
    let lead = u.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(0.0);
    let flip = if sum.abs() > 1e-9 { sum < 0.0 } else { lead < 0.0 };
    if flip {
        u.iter_mut().for_each(|x| *x = -*x);
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Rank-`c` truncated SVD. Singular values come out in descending order;
/// directions belonging to zero singular values are filled in with an
/// orthonormal completion.
pub fn truncated_svd(x: &DenseMatrix, c: usize) -> Result<TruncatedSvd> {
    if c == 0 || c > x.rows.min(x.cols) {
        return Err(Error::InvalidParameter(format!(
            "rank {c} must lie in 1..={} for a {}x{} matrix",
            x.rows.min(x.cols),
            x.rows,
            x.cols
        )));
    }
    let transposed = x.rows < x.cols;
    let mut a = if transposed { x.transpose() } else { x.clone() };
    let w = orthogonalize(&mut a);

    let mut order: Vec<(f64, usize)> = (0..a.cols).map(|j| (norm(a.column(j)), j)).collect();
    order.sort_by(|l, r| r.0.total_cmp(&l.0).then(l.1.cmp(&r.1)));
    let top = order[0].0;
    let cutoff = top * 1e-13;

    // columns of `a` are `σ·(left vector)`, columns of `w` the right ones
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut values = Vec::new();
    for &(s, j) in order.iter().take(c) {
        values.push(s);
        if s > cutoff && s > 0.0 {
            left.push(a.column(j).iter().map(|x| x / s).collect::<Vec<_>>());
            right.push(w.column(j).to_vec());
        }
    }
    let rank = left.len();
    complete(&mut left, a.rows, c);
    complete(&mut right, a.cols, c);
    for s in values.iter_mut().skip(rank) {
        *s = 0.0;
    }
    let (mut u, mut v) = if transposed { (right, left) } else { (left, right) };
    for k in 0..c {
        fix_sign(&mut u[k], &mut v[k]);
    }
    Ok(TruncatedSvd { singular_values: values, u, v })
}
