//! Cyclic Jacobi eigendecomposition of dense symmetric matrices.

use crate::error::{Error, Result};
use crate::linalg::{Embedding, SymmetricMatrix};

pub const MAX_SWEEPS: usize = 100;
/// Convergence target for the off-diagonal Frobenius norm, relative to the
/// norm of the whole matrix.
pub const TOLERANCE: f64 = 1e-12;

/// The smallest `k` eigenpairs of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `j` is the unit eigenvector of `values[j]`.
    pub vectors: Embedding,
}

/// Eigenvalues in ascending order with orthonormal eigenvectors for the
/// `k` algebraically smallest of them.
///
/// Each eigenvector is oriented so that its largest-magnitude component is
/// positive.
pub fn eigensolve_symmetric(matrix: &SymmetricMatrix, k: usize) -> Result<EigenDecomposition> {
    let n = matrix.order();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs of a matrix of order {n}"
        )));
    }
    let (values, vectors) = jacobi(matrix)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]).then(x.cmp(&y)));
    order.truncate(k);

    let mut data = vec![0.0; n * k];
    for (col, &src) in order.iter().enumerate() {
        let column: Vec<f64> = (0..n).map(|row| vectors[row * n + src]).collect();
        let pivot = column
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, &v)| {
                if v.abs() > best.1.abs() {
                    (i, v)
                } else {
                    best
                }
            })
            .0;
        let sign = if column[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (row, v) in column.into_iter().enumerate() {
            data[row * k + col] = sign * v;
        }
    }
    Ok(EigenDecomposition {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: Embedding::from_row_major(n, k, data),
    })
}

/// All eigenvalues (unsorted, diagonal order) and the row-major eigenvector
/// matrix whose column `j` belongs to value `j`.
fn jacobi(matrix: &SymmetricMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = matrix.order();
    let mut a = matrix.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = TOLERANCE * norm;
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        s.sqrt()
    };

    let mut off = off_norm(&a);
    let mut sweep = 0;
    while off > target {
        if sweep == MAX_SWEEPS {
            return Err(Error::EigenNoConvergence {
                sweeps: sweep,
                off_diagonal: off,
                target,
            });
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                // Negligible entries are flushed once the sweep count
                // suggests we are in the quadratic regime.
                let g = 100.0 * apq.abs();
                if sweep > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        off = off_norm(&a);
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}

/// Annihilates `a[p][q]` with a Givens rotation, applied on both sides of
/// `a` and accumulated into the columns of `v`.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[p * n + p] -= t * apq;
    a[q * n + q] += t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        a[k * n + p] = new_p;
        a[p * n + k] = new_p;
        a[k * n + q] = new_q;
        a[q * n + k] = new_q;
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}
