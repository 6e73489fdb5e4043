//! Community detection.
//!
//! Five algorithms share one entry point, [`detect`], and one output type,
//! [`CommunityReport`]. Every report carries a canonical partition together
//! with its weighted modularity recomputed on the input graph.

mod dendrogram;
mod fastgreedy;
mod louvain;
mod spectral;
mod spinglass;
mod walktrap;

use std::fmt;
use std::str::FromStr;

pub use dendrogram::Dendrogram;
pub use fastgreedy::{fast_greedy, fast_greedy_dendrogram};
pub use louvain::louvain;
pub use spectral::{eigengap_k, laplacian, spectral, LaplacianKind};
pub use spinglass::{hamiltonian, spinglass};
pub use walktrap::{walktrap, walktrap_dendrogram};

use crate::error::{Error, Result};
use crate::graph::{modularity, Partition, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Louvain,
    FastGreedy,
    Walktrap,
    Spinglass,
    Spectral,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Louvain,
        Algorithm::FastGreedy,
        Algorithm::Walktrap,
        Algorithm::Spinglass,
        Algorithm::Spectral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Louvain => "louvain",
            Algorithm::FastGreedy => "fastgreedy",
            Algorithm::Walktrap => "walktrap",
            Algorithm::Spinglass => "spinglass",
            Algorithm::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s
            .trim()
            .to_ascii_lowercase()
            .replace(['_', '-'], "")
            .as_str()
        {
            "louvain" | "multilevel" => Ok(Algorithm::Louvain),
            "fastgreedy" => Ok(Algorithm::FastGreedy),
            "walktrap" => Ok(Algorithm::Walktrap),
            "spinglass" => Ok(Algorithm::Spinglass),
            "spectral" => Ok(Algorithm::Spectral),
            _ => Err(Error::UnknownValue {
                kind: "algorithm",
                value: s.to_string(),
            }),
        }
    }
}

/// Simulated-annealing schedule for [`spinglass`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    /// Start temperature in units of the component's mean weighted degree.
    pub start_temperature: f64,
    /// Geometric cooling factor applied after every sweep.
    pub cooling: f64,
    pub max_sweeps: usize,
    /// Annealing stops once the share of spins that changed over the last
    /// ten sweeps falls below this fraction.
    pub min_acceptance: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            start_temperature: 1.0,
            cooling: 0.99,
            max_sweeps: 300,
            min_acceptance: 0.001,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmParams {
    pub algorithm: Algorithm,
    /// Louvain null-model scaling.
    pub resolution: f64,
    /// Spinglass null-model scaling.
    pub gamma: f64,
    /// Walktrap random-walk length.
    pub walk_length: usize,
    /// Maximum number of spin states (communities) for Spinglass.
    pub spin_states: usize,
    /// Spectral cluster count; `None` picks it by the largest eigengap.
    pub k_clusters: Option<usize>,
    pub laplacian: LaplacianKind,
    pub anneal: AnnealSchedule,
    pub seed: u64,
}

impl AlgorithmParams {
    pub fn new(algorithm: Algorithm) -> Self {
        AlgorithmParams {
            algorithm,
            resolution: 1.0,
            gamma: 1.0,
            walk_length: 4,
            spin_states: 25,
            k_clusters: None,
            laplacian: LaplacianKind::Unnormalized,
            anneal: AnnealSchedule::default(),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k_clusters = Some(k);
        self
    }

    pub fn with_resolution(mut self, resolution: f64) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidParameter(what));
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return bad(format!("resolution must be > 0, got {}", self.resolution));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return bad(format!("gamma must be > 0, got {}", self.gamma));
        }
        if self.walk_length < 1 {
            return bad("walk length must be at least 1".into());
        }
        if self.spin_states < 2 {
            return bad(format!(
                "spin states must be at least 2, got {}",
                self.spin_states
            ));
        }
        if self.k_clusters == Some(0) {
            return bad("k must be at least 1".into());
        }
        let a = &self.anneal;
        if !(a.start_temperature > 0.0 && a.cooling > 0.0 && a.cooling < 1.0 && a.max_sweeps > 0) {
            return bad(format!("invalid annealing schedule {a:?}"));
        }
        Ok(())
    }
}

/// A detected partition and its score.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityReport {
    pub algorithm: Algorithm,
    pub params: AlgorithmParams,
    pub seed: u64,
    /// Canonical labels aligned with the graph's node order.
    pub partition: Partition,
    /// Weighted modularity (resolution 1) of `partition`.
    pub modularity: f64,
    pub community_count: usize,
    /// Per-algorithm progress series: Louvain's resolution-scaled objective
    /// after each level, the dendrogram modularities for FastGreedy and
    /// Walktrap, the energy after annealing and after the final refinement
    /// for Spinglass, and the computed Laplacian spectrum for Spectral.
    pub trace: Vec<f64>,
}

impl CommunityReport {
    fn new(
        graph: &WeightedGraph,
        params: &AlgorithmParams,
        partition: Partition,
        trace: Vec<f64>,
    ) -> Result<Self> {
        let partition = partition.canonical();
        let q = modularity(graph, &partition)?;
        Ok(CommunityReport {
            algorithm: params.algorithm,
            params: params.clone(),
            seed: params.seed,
            community_count: partition.community_count(),
            partition,
            modularity: q,
            trace,
        })
    }
}

/// Runs the algorithm named in `params`.
pub fn detect(graph: &WeightedGraph, params: &AlgorithmParams) -> Result<CommunityReport> {
    match params.algorithm {
        Algorithm::Louvain => louvain(graph, params),
        Algorithm::FastGreedy => fast_greedy(graph, params),
        Algorithm::Walktrap => walktrap(graph, params),
        Algorithm::Spinglass => spinglass(graph, params),
        Algorithm::Spectral => spectral(graph, params),
    }
}

fn check_input(graph: &WeightedGraph, params: &AlgorithmParams) -> Result<()> {
    params.validate()?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(())
}
