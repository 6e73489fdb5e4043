//! Spectral clustering.
//!
//! Nodes are embedded as rows of the eigenvectors belonging to the `k`
//! smallest Laplacian eigenvalues and grouped by k-means. Without an
//! explicit `k` the count is chosen at the largest gap between consecutive
//! eigenvalues among the smallest `min(20, n)`.
//!
//! The random-walk Laplacian `L_rw = I − D⁻¹W` is not symmetric; it shares
//! its spectrum with `L_sym = D^{-1/2} L D^{-1/2}`, and an eigenvector `u` of
//! `L_sym` maps to the eigenvector `D^{-1/2} u` of `L_rw`.

use std::fmt;
use std::str::FromStr;

use crate::community::{check_input, AlgorithmParams, CommunityReport};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{eigensolve_symmetric, kmeans, SymmetricMatrix};

/// Eigenvalues inspected by the eigengap heuristic.
const EIGENGAP_WINDOW: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianKind {
    /// `L = D − W`.
    #[default]
    Unnormalized,
    /// `L_rw = I − D⁻¹W`.
    RandomWalk,
}

impl fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LaplacianKind::Unnormalized => "unnormalized",
            LaplacianKind::RandomWalk => "random-walk",
        })
    }
}

impl FromStr for LaplacianKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unnormalized" | "l" | "standard" => Ok(LaplacianKind::Unnormalized),
            "random-walk" | "randomwalk" | "rw" | "l_rw" => Ok(LaplacianKind::RandomWalk),
            _ => Err(Error::UnknownValue {
                kind: "laplacian",
                value: s.to_string(),
            }),
        }
    }
}

/// The symmetric matrix whose eigenpairs drive the embedding: `L` itself,
/// or `L_sym` for the random-walk variant. Isolated nodes get a zero row.
pub fn laplacian(graph: &WeightedGraph, kind: LaplacianKind) -> SymmetricMatrix {
    let n = graph.node_count();
    let mut m = SymmetricMatrix::zeros(n);
    match kind {
        LaplacianKind::Unnormalized => {
            for i in 0..n {
                m.set(i, i, graph.degree(i));
            }
            for e in graph.edges() {
                m.set(e.source, e.target, -e.weight);
            }
        }
        LaplacianKind::RandomWalk => {
            let inv_sqrt: Vec<f64> = graph
                .degrees()
                .iter()
                .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
                .collect();
            for i in 0..n {
                if graph.degree(i) > 0.0 {
                    m.set(i, i, 1.0);
                }
            }
            for e in graph.edges() {
                m.set(
                    e.source,
                    e.target,
                    -e.weight * inv_sqrt[e.source] * inv_sqrt[e.target],
                );
            }
        }
    }
    m
}

/// Position of the largest gap in ascending `values`, plus one. The first
/// maximum wins; a single value gives 1.
pub fn eigengap_k(values: &[f64]) -> usize {
    let mut best = (1, f64::NEG_INFINITY);
    for (i, w) in values.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if gap > best.1 {
            best = (i + 1, gap);
        }
    }
    best.0
}

pub fn spectral(graph: &WeightedGraph, params: &AlgorithmParams) -> Result<CommunityReport> {
    check_input(graph, params)?;
    let n = graph.node_count();
    if let Some(k) = params.k_clusters {
        if k > n {
            return Err(Error::TooManyClusters { k, points: n });
        }
    }
    let wanted = params.k_clusters.unwrap_or(0).max(EIGENGAP_WINDOW.min(n));
    let matrix = laplacian(graph, params.laplacian);
    let eig = eigensolve_symmetric(&matrix, wanted)?;
    let k = params
        .k_clusters
        .unwrap_or_else(|| eigengap_k(&eig.values[..EIGENGAP_WINDOW.min(n)]));

    let mut embedding = eig.vectors.clone();
    if params.laplacian == LaplacianKind::RandomWalk {
        for i in 0..n {
            let d = graph.degree(i);
            let s = if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 };
            embedding.row_mut(i).iter_mut().for_each(|x| *x *= s);
        }
        embedding.normalize_columns();
    }
    let cols: Vec<f64> = (0..n)
        .flat_map(|i| embedding.row(i)[..k].to_vec())
        .collect();
    let points = crate::linalg::Embedding::from_row_major(n, k, cols);
    let clusters = kmeans(&points, k, params.seed)?;
    CommunityReport::new(graph, params, clusters.partition, eig.values)
}
