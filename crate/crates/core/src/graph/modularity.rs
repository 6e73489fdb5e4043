//! Newman–Girvan modularity on weighted graphs.
//!
//! With `A_ij` the edge weight, `k_i` the weighted degree and `2m` the sum
//! of all weighted degrees,
//!
//! ```text
//! Q = 1/(2m) Σ_ij (A_ij − γ k_i k_j / 2m) δ(c_i, c_j)
//! ```
//!
//! evaluated here in the per-community form
//! `Σ_c [Σ_in,c / 2m − γ (Σ_tot,c / 2m)²]`, which is O(n + m).

use crate::error::{Error, Result};
use crate::graph::{Partition, WeightedGraph};

/// Modularity of `partition` on `graph` (resolution 1).
pub fn modularity(graph: &WeightedGraph, partition: &Partition) -> Result<f64> {
    modularity_with_resolution(graph, partition, 1.0)
}

/// Modularity with the null-model term scaled by `resolution`.
pub fn modularity_with_resolution(
    graph: &WeightedGraph,
    partition: &Partition,
    resolution: f64,
) -> Result<f64> {
    if partition.len() != graph.node_count() {
        return Err(Error::PartitionMismatch {
            expected: graph.node_count(),
            found: partition.len(),
        });
    }
    let two_m = 2.0 * graph.total_weight();
    if graph.is_empty() || two_m <= 0.0 {
        return Err(Error::ModularityUndefined);
    }

    let canon = partition.canonical();
    let c = canon.community_count();
    let mut internal = vec![0.0; c];
    let mut total = vec![0.0; c];
    for (node, &label) in canon.labels().iter().enumerate() {
        total[label] += graph.degree(node);
    }
    for e in graph.edges() {
        let label = canon.label(e.source);
        if label == canon.label(e.target) {
            internal[label] += 2.0 * e.weight;
        }
    }
    Ok(internal
        .iter()
        .zip(&total)
        .map(|(&sin, &tot)| sin / two_m - resolution * (tot / two_m) * (tot / two_m))
        .sum())
}

/// How modularity is evaluated on a finished network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModularityMode {
    /// Edge weights as stored.
    #[default]
    Weighted,
    /// Every edge counted with weight 1.
    Binarized,
}

impl ModularityMode {
    pub fn score(self, graph: &WeightedGraph, partition: &Partition) -> Result<f64> {
        match self {
            ModularityMode::Weighted => modularity(graph, partition),
            ModularityMode::Binarized => modularity(&graph.binarized(), partition),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModularityMode::Weighted => "weighted",
            ModularityMode::Binarized => "binarized",
        }
    }
}

impl std::str::FromStr for ModularityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "weighted" => Ok(ModularityMode::Weighted),
            "binarized" | "binary" => Ok(ModularityMode::Binarized),
            _ => Err(Error::UnknownValue {
                kind: "modularity mode",
                value: s.to_string(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct double sum over all ordered node pairs on a dense adjacency
    /// matrix.
    fn pairwise_oracle(n: usize, edges: &[(usize, usize, f64)], labels: &[usize]) -> f64 {
        let mut a = vec![vec![0.0; n]; n];
        for &(i, j, w) in edges {
            a[i][j] += w;
            a[j][i] += w;
        }
        let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
        let two_m: f64 = k.iter().sum();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                if labels[i] == labels[j] {
                    q += a[i][j] - k[i] * k[j] / two_m;
                }
            }
        }
        q / two_m
    }

    fn build(n: usize, edges: &[(usize, usize, f64)]) -> WeightedGraph {
        let mut b = WeightedGraph::builder();
        for i in 0..n {
            b.add_node(&format!("n{i}")).unwrap();
        }
        for &(i, j, w) in edges {
            b.add_edge(i, j, w).unwrap();
        }
        b.build().unwrap()
    }

    fn two_triangles() -> (usize, Vec<(usize, usize, f64)>) {
        (
            6,
            vec![
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
            ],
        )
    }

    #[test]
    fn single_edge_one_community_is_zero() {
        let g = build(2, &[(0, 1, 1.0)]);
        assert_eq!(
            modularity(&g, &Partition::single_community(2)).unwrap(),
            0.0
        );
    }

    #[test]
    fn two_triangles_reference_values() {
        let (n, edges) = two_triangles();
        let g = build(n, &edges);
        let cases = [
            (vec![0, 0, 0, 1, 1, 1], 0.5),
            (vec![0; 6], 0.0),
            ((0..6).collect::<Vec<_>>(), -1.0 / 6.0),
        ];
        for (labels, expected) in cases {
            let oracle = pairwise_oracle(n, &edges, &labels);
            assert!(
                (oracle - expected).abs() < 1e-12,
                "oracle {oracle} vs {expected}"
            );
            let q = modularity(&g, &Partition::new(labels)).unwrap();
            assert!((q - expected).abs() < 1e-9, "{q} vs {expected}");
        }
    }

    #[test]
    fn undefined_without_edges() {
        let g = build(3, &[]);
        assert!(matches!(
            modularity(&g, &Partition::single_community(3)),
            Err(Error::ModularityUndefined)
        ));
        let empty = build(0, &[]);
        assert!(modularity(&empty, &Partition::new(vec![])).is_err());
    }

    #[test]
    fn partial_partition_rejected() {
        let g = build(2, &[(0, 1, 1.0)]);
        assert!(matches!(
            modularity(&g, &Partition::new(vec![0])),
            Err(Error::PartitionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn binarized_mode_ignores_weights() {
        let g = build(3, &[(0, 1, 10.0), (1, 2, 1.0)]);
        let p = Partition::new(vec![0, 0, 1]);
        let weighted = ModularityMode::Weighted.score(&g, &p).unwrap();
        let binary = ModularityMode::Binarized.score(&g, &p).unwrap();
        let unit = build(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        assert!((binary - modularity(&unit, &p).unwrap()).abs() < 1e-15);
        assert!(weighted > binary);
    }

    fn random_instance() -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>, Vec<usize>)> {
        (2usize..=30).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            let npairs = pairs.len();
            (
                Just(n),
                proptest::collection::vec(proptest::option::weighted(0.3, 0.1f64..5.0), npairs)
                    .prop_map(move |ws| {
                        pairs
                            .iter()
                            .zip(ws)
                            .filter_map(|(&(i, j), w)| w.map(|w| (i, j, w)))
                            .collect::<Vec<_>>()
                    }),
                proptest::collection::vec(0usize..5, n),
            )
        })
    }

    proptest! {
        #[test]
        fn matches_pairwise_form((n, edges, labels) in random_instance()) {
            prop_assume!(!edges.is_empty());
            let g = build(n, &edges);
            let q = modularity(&g, &Partition::new(labels.clone())).unwrap();
            prop_assert!((q - pairwise_oracle(n, &edges, &labels)).abs() < 1e-9);
            prop_assert!(q <= 1.0);
        }

        #[test]
        fn scale_free((n, edges, labels) in random_instance(), factor in 0.01f64..100.0) {
            prop_assume!(!edges.is_empty());
            let g = build(n, &edges);
            let p = Partition::new(labels);
            let q1 = modularity(&g, &p).unwrap();
            let q2 = modularity(&g.scaled(factor), &p).unwrap();
            prop_assert!((q1 - q2).abs() < 1e-9);
        }

        #[test]
        fn permutation_invariant((n, edges, labels) in random_instance(), seed in any::<u64>()) {
            prop_assume!(!edges.is_empty());
            use rand::{seq::SliceRandom, SeedableRng};
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let permuted_edges: Vec<_> = edges.iter().map(|&(i, j, w)| (order[i], order[j], w)).collect();
            let p = Partition::new(labels);
            let q1 = modularity(&build(n, &edges), &p).unwrap();
            let q2 = modularity(&build(n, &permuted_edges), &p.permuted(&order)).unwrap();
            prop_assert!((q1 - q2).abs() < 1e-12);
        }

        #[test]
        fn singletons_negative((n, edges, _labels) in random_instance()) {
            prop_assume!(!edges.is_empty());
            let g = build(n, &edges);
            prop_assert!(modularity(&g, &Partition::singletons(n)).unwrap() < 0.0);
        }
    }
}
