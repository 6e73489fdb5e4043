//! Dense symmetric eigensolver and k-means for spectral clustering.

mod jacobi;
mod kmeans;

pub use jacobi::{eigensolve_symmetric, EigenDecomposition, MAX_SWEEPS, TOLERANCE};
pub use kmeans::{kmeans, KMeansResult, MAX_ITERATIONS};

use crate::error::{Error, Result};

/// Dense symmetric matrix in packed lower-triangular storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    lower: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize) -> Self {
        SymmetricMatrix {
            order,
            lower: vec![0.0; order * (order + 1) / 2],
        }
    }

    /// Packed row-major lower triangle: `(0,0), (1,0), (1,1), (2,0), …`.
    pub fn from_lower(order: usize, lower: Vec<f64>) -> Result<Self> {
        if lower.len() != order * (order + 1) / 2 {
            return Err(Error::InvalidParameter(format!(
                "{} entries cannot fill the lower triangle of order {order}",
                lower.len()
            )));
        }
        if let Some(x) = lower.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite matrix entry {x}"
            )));
        }
        Ok(SymmetricMatrix { order, lower })
    }

    /// Reads the lower triangle of `f(i, j)`; the upper triangle is never consulted.
    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                m.lower[Self::offset(i, j)] = f(i, j);
            }
        }
        m
    }

    fn offset(i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[Self::offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.lower[Self::offset(i, j)] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.lower[Self::offset(i, j)] += value;
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.order {
            for j in 0..=i {
                let x = self.get(i, j);
                s += if i == j { x * x } else { 2.0 * x * x };
            }
        }
        s.sqrt()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.order;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = self.get(i, j);
                out[i * n + j] = x;
                out[j * n + i] = x;
            }
        }
        out
    }
}

/// `rows × cols` matrix of node coordinates, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Embedding {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Embedding { rows, cols, data }
    }

    pub fn from_points(points: &[Vec<f64>]) -> Self {
        let cols = points.first().map_or(0, Vec::len);
        assert!(points.iter().all(|p| p.len() == cols), "ragged points");
        Embedding {
            rows: points.len(),
            cols,
            data: points.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols + j])
            .collect()
    }

    /// Rescales each column to unit Euclidean norm (zero columns are left alone).
    pub fn normalize_columns(&mut self) {
        for j in 0..self.cols {
            let norm = self.column(j).iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                for i in 0..self.rows {
                    self.data[i * self.cols + j] /= norm;
                }
            }
        }
    }
}
