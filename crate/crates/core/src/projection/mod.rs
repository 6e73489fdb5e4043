//! Item co-preference networks.
//!
//! The bipartite incidence matrix `A` (users × items) is projected onto the
//! items through `P = AᵀA`: the off-diagonal entry `P_jk` counts users who
//! liked both `j` and `k`, and the diagonal is discarded. The resulting raw
//! counts `C_jk` can then be blended with the category ratings of the two
//! endpoints,
//!
//! ```text
//! W_jk = a·R_j + a·R_k + b·C_jk      (a = 0.6, b = 0.4 by default)
//! ```
//!
//! filtered (`W ≤ 3` dropped), stripped of isolated items, and finally
//! normalized by the product of the endpoints' edge counts.

mod ratings;

use std::collections::HashMap;
use std::str::FromStr;

pub use ratings::{CategoryRating, ItemRatings};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::ingest::{BipartiteGraph, Category};

/// An item–item edge with its co-preference count and current weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoEdge {
    pub a: usize,
    pub b: usize,
    pub count: u32,
    pub weight: f64,
}

/// Weighted item graph that keeps the raw co-preference count of every
/// edge next to its (possibly blended and normalized) weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CoPreferenceGraph {
    items: Vec<String>,
    names: Vec<Option<String>>,
    edges: Vec<CoEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlendCoefficients {
    pub rating: f64,
    pub count: f64,
}

impl Default for BlendCoefficients {
    fn default() -> Self {
        BlendCoefficients {
            rating: 0.6,
            count: 0.4,
        }
    }
}

impl BlendCoefficients {
    pub fn weight(&self, rating_j: f64, rating_k: f64, count: u32) -> f64 {
        self.rating * rating_j + self.rating * rating_k + self.count * f64::from(count)
    }
}

/// Which quantity the low-weight edge filter compares against its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeFilterMode {
    /// The current edge weight (blended, when blending was applied).
    #[default]
    Blended,
    /// The raw co-preference count.
    RawCount,
}

impl FromStr for EdgeFilterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "blended" | "weight" => Ok(EdgeFilterMode::Blended),
            "raw" | "raw-count" | "count" => Ok(EdgeFilterMode::RawCount),
            other => Err(Error::UnknownValue {
                kind: "filter mode",
                value: other.to_string(),
            }),
        }
    }
}

impl CoPreferenceGraph {
    /// Builds a graph from explicit `(a, b, count)` triples over `items`;
    /// weights start equal to the counts.
    pub fn from_counts(items: Vec<String>, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let names = vec![None; items.len()];
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b, count) in edges {
            if a == b {
                return Err(Error::SelfLoop(items[a].clone()));
            }
            if count == 0 {
                continue;
            }
            out.push(CoEdge {
                a: a.min(b),
                b: a.max(b),
                count,
                weight: f64::from(count),
            });
        }
        out.sort_by_key(|e| (e.a, e.b));
        if out.windows(2).any(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b)) {
            return Err(Error::InvalidParameter(
                "duplicate co-preference edge".into(),
            ));
        }
        Ok(CoPreferenceGraph {
            items,
            names,
            edges: out,
        })
    }

    /// Reassembles a graph from items, display names and finished edges,
    /// as read back from a serialized network.
    pub fn from_parts(
        items: Vec<String>,
        names: Vec<Option<String>>,
        mut edges: Vec<CoEdge>,
    ) -> Result<Self> {
        if names.len() != items.len() {
            return Err(Error::InvalidParameter(format!(
                "{} names for {} items",
                names.len(),
                items.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = items.iter().find(|i| !seen.insert(i.as_str())) {
            return Err(Error::DuplicateNode(dup.clone()));
        }
        for e in &mut edges {
            if e.a >= items.len() || e.b >= items.len() {
                return Err(Error::NodeNotFound(format!("index {}", e.a.max(e.b))));
            }
            if e.a == e.b {
                return Err(Error::SelfLoop(items[e.a].clone()));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidWeight {
                    source_node: items[e.a].clone(),
                    target_node: items[e.b].clone(),
                    weight: e.weight,
                });
            }
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
        }
        edges.sort_by_key(|e| (e.a, e.b));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b))
        {
            return Err(Error::DuplicateEdge(
                items[w[0].a].clone(),
                items[w[0].b].clone(),
            ));
        }
        Ok(CoPreferenceGraph {
            items,
            names,
            edges,
        })
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn name(&self, item: usize) -> Option<&str> {
        self.names[item].as_deref()
    }

    pub fn set_names(&mut self, names: &HashMap<String, String>) {
        for (slot, id) in self.names.iter_mut().zip(&self.items) {
            if let Some(n) = names.get(id) {
                *slot = Some(n.clone());
            }
        }
    }

    /// Edges sorted by `(a, b)` with `a < b`.
    pub fn edges(&self) -> &[CoEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of incident edges per item.
    pub fn edge_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.items.len()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    /// Replaces every weight with `a·R_j + a·R_k + b·C_jk` using the
    /// category ratings of the endpoints. Items without a rating get the
    /// category mean (with a warning). Edges whose blended weight is not
    /// positive are dropped.
    pub fn blend_weights(
        &self,
        ratings: &ItemRatings,
        category: Category,
        coefficients: BlendCoefficients,
    ) -> Result<CoPreferenceGraph> {
        let BlendCoefficients { rating, count } = coefficients;
        if !(rating.is_finite() && count.is_finite() && rating >= 0.0 && count >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "blend coefficients must be non-negative, got {rating} and {count}"
            )));
        }
        let mut resolved: Vec<Option<f64>> = vec![None; self.items.len()];
        let mut missing = Vec::new();
        for e in &self.edges {
            for item in [e.a, e.b] {
                if resolved[item].is_none() {
                    match ratings.get(&self.items[item], category) {
                        Some(r) => resolved[item] = Some(r.average),
                        None => {
                            missing.push(item);
                            resolved[item] = Some(f64::NAN);
                        }
                    }
                }
            }
        }
        if !missing.is_empty() {
            let mean = ratings
                .category_mean(category)
                .ok_or_else(|| Error::NoRatings(category.to_string()))?;
            log::warn!(
                "{} items have no {category} rating; using the category mean {mean:.3}",
                missing.len()
            );
            for item in missing {
                resolved[item] = Some(mean);
            }
        }

        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let w = coefficients.weight(resolved[e.a]?, resolved[e.b]?, e.count);
                (w > 0.0).then_some(CoEdge { weight: w, ..*e })
            })
            .collect();
        Ok(self.with_edges(edges))
    }

    /// Drops edges whose weight (or raw count) is at most `min_weight`.
    pub fn filter_edges(&self, min_weight: f64, mode: EdgeFilterMode) -> CoPreferenceGraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| match mode {
                EdgeFilterMode::Blended => e.weight > min_weight,
                EdgeFilterMode::RawCount => f64::from(e.count) > min_weight,
            })
            .copied()
            .collect();
        self.with_edges(edges)
    }

    /// Removes items with no incident edges.
    pub fn prune_isolated(&self) -> CoPreferenceGraph {
        let deg = self.edge_degrees();
        let mut remap = vec![usize::MAX; self.items.len()];
        let mut items = Vec::new();
        let mut names = Vec::new();
        for (i, &d) in deg.iter().enumerate() {
            if d > 0 {
                remap[i] = items.len();
                items.push(self.items[i].clone());
                names.push(self.names[i].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| CoEdge {
                a: remap[e.a],
                b: remap[e.b],
                ..*e
            })
            .collect();
        CoPreferenceGraph {
            items,
            names,
            edges,
        }
    }

    /// Divides each weight by the product of its endpoints' edge counts,
    /// all taken from the graph before any weight changes.
    pub fn normalize_weights(&self) -> CoPreferenceGraph {
        let deg = self.edge_degrees();
        let edges = self
            .edges
            .iter()
            .map(|e| CoEdge {
                weight: e.weight / (deg[e.a] as f64 * deg[e.b] as f64),
                ..*e
            })
            .collect();
        self.with_edges(edges)
    }

    fn with_edges(&self, edges: Vec<CoEdge>) -> CoPreferenceGraph {
        CoPreferenceGraph {
            items: self.items.clone(),
            names: self.names.clone(),
            edges,
        }
    }

    /// The weighted item graph that community detection runs on.
    pub fn to_weighted_graph(&self) -> WeightedGraph {
        let mut builder = WeightedGraph::builder();
        for (id, name) in self.items.iter().zip(&self.names) {
            builder
                .add_node_with_name(id, name.clone())
                .expect("item ids are unique");
        }
        for e in &self.edges {
            builder
                .add_edge(e.a, e.b, e.weight)
                .expect("co-preference edges are valid");
        }
        builder.build().expect("co-preference edges are unique")
    }
}

/// Projects users away: items `j`, `k` are joined with count
/// `C_jk = |{users who liked both}|`. Self-co-occurrence is discarded;
/// items that co-occur with nothing remain as isolated nodes.
pub fn project_bipartite(bipartite: &BipartiteGraph) -> CoPreferenceGraph {
    let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
    for items in bipartite.items_by_user() {
        for (x, &j) in items.iter().enumerate() {
            for &k in &items[x + 1..] {
                *counts.entry((j as u32, k as u32)).or_default() += 1;
            }
        }
    }
    let mut edges: Vec<CoEdge> = counts
        .into_iter()
        .map(|((a, b), count)| CoEdge {
            a: a as usize,
            b: b as usize,
            count,
            weight: f64::from(count),
        })
        .collect();
    edges.sort_by_key(|e| (e.a, e.b));
    let names = (0..bipartite.items().len())
        .map(|i| bipartite.item_name(i).map(str::to_string))
        .collect();
    CoPreferenceGraph {
        items: bipartite.items().to_vec(),
        names,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn items(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("perfume_{i}")).collect()
    }

    fn bipartite_from_matrix(rows: &[Vec<bool>]) -> BipartiteGraph {
        let ids: Vec<(String, String)> = rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x)
                    .map(move |(i, _)| (format!("user_{u:02}"), format!("perfume_{i:02}")))
            })
            .collect();
        BipartiteGraph::from_pairs(ids.iter().map(|(u, i)| (u.as_str(), i.as_str())))
    }

    #[test]
    fn small_product() {
        let b = bipartite_from_matrix(&[vec![true, true], vec![false, true]]);
        let g = project_bipartite(&b);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].count, 1);
        assert_eq!((g.edges()[0].a, g.edges()[0].b), (0, 1));
    }

    #[test]
    fn zero_matrix_has_no_edges() {
        let b = bipartite_from_matrix(&[vec![false, false]]);
        assert_eq!(project_bipartite(&b).edge_count(), 0);
    }

    #[test]
    fn one_user_likes_all_gives_clique() {
        let b = bipartite_from_matrix(&[vec![true; 4]]);
        let g = project_bipartite(&b);
        assert_eq!(g.edge_count(), 6);
        assert!(g.edges().iter().all(|e| e.count == 1));
    }

    fn single_edge(count: u32) -> CoPreferenceGraph {
        CoPreferenceGraph::from_counts(items(2), &[(0, 1, count)]).unwrap()
    }

    fn ratings(values: &[(usize, f64)]) -> ItemRatings {
        let mut r = ItemRatings::new();
        for &(i, v) in values {
            r.insert(&format!("perfume_{i}"), Category::Scent, v, 10)
                .unwrap();
        }
        r
    }

    #[test]
    fn blend_reference_values() {
        let w = BlendCoefficients::default().weight(8.2, 8.2, 5);
        assert!((w - 11.84).abs() < 1e-12);
        let g = single_edge(5)
            .blend_weights(
                &ratings(&[(0, 8.2), (1, 8.2)]),
                Category::Scent,
                Default::default(),
            )
            .unwrap();
        assert!((g.edges()[0].weight - 11.84).abs() < 1e-12);
        assert_eq!(g.edges()[0].count, 5);

        let g = single_edge(1)
            .blend_weights(
                &ratings(&[(0, 10.0), (1, 10.0)]),
                Category::Scent,
                Default::default(),
            )
            .unwrap();
        assert!((g.edges()[0].weight - 12.4).abs() < 1e-12);
    }

    #[test]
    fn degenerate_blend_drops_edge() {
        assert_eq!(BlendCoefficients::default().weight(0.0, 0.0, 0), 0.0);
        let zero_count = BlendCoefficients {
            rating: 0.6,
            count: 0.0,
        };
        let g = single_edge(3)
            .blend_weights(&ratings(&[(0, 0.0), (1, 0.0)]), Category::Scent, zero_count)
            .unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn missing_rating_uses_category_mean() {
        let g = CoPreferenceGraph::from_counts(items(3), &[(0, 1, 2), (1, 2, 2)]).unwrap();
        let r = ratings(&[(0, 6.0), (1, 8.0)]);
        let blended = g
            .blend_weights(&r, Category::Scent, Default::default())
            .unwrap();
        // item 2 falls back to mean(6, 8) = 7
        let expected = 0.6 * 8.0 + 0.6 * 7.0 + 0.4 * 2.0;
        assert!((blended.edges()[1].weight - expected).abs() < 1e-12);
        let none = g.blend_weights(&ItemRatings::new(), Category::Scent, Default::default());
        assert!(matches!(none, Err(Error::NoRatings(_))));
    }

    #[test]
    fn negative_coefficients_rejected() {
        let bad = BlendCoefficients {
            rating: -0.1,
            count: 0.4,
        };
        assert!(single_edge(1)
            .blend_weights(&ratings(&[(0, 5.0), (1, 5.0)]), Category::Scent, bad)
            .is_err());
    }

    fn with_weights(weights: &[f64]) -> CoPreferenceGraph {
        let n = weights.len() + 1;
        let edges: Vec<_> = (0..weights.len()).map(|i| (i, i + 1, 1)).collect();
        let mut g = CoPreferenceGraph::from_counts(items(n), &edges).unwrap();
        for (e, &w) in g.edges.iter_mut().zip(weights) {
            e.weight = w;
        }
        g
    }

    #[test]
    fn filter_boundary() {
        let g = with_weights(&[3.0, 3.01]);
        let f = g.filter_edges(3.0, EdgeFilterMode::Blended);
        assert_eq!(f.edge_count(), 1);
        assert_eq!(f.edges()[0].weight, 3.01);
    }

    #[test]
    fn filter_threshold_set() {
        let f = with_weights(&[2.0, 3.0, 5.0, 9.0]).filter_edges(3.0, EdgeFilterMode::Blended);
        let kept: Vec<f64> = f.edges().iter().map(|e| e.weight).collect();
        assert_eq!(kept, vec![5.0, 9.0]);
        let empty = CoPreferenceGraph::from_counts(vec![], &[]).unwrap();
        assert_eq!(empty.filter_edges(3.0, EdgeFilterMode::Blended), empty);
    }

    #[test]
    fn raw_count_filter_mode() {
        let g = CoPreferenceGraph::from_counts(items(3), &[(0, 1, 3), (1, 2, 4)]).unwrap();
        let blended = g
            .blend_weights(
                &ratings(&[(0, 9.0), (1, 9.0), (2, 9.0)]),
                Category::Scent,
                Default::default(),
            )
            .unwrap();
        assert_eq!(
            blended
                .filter_edges(3.0, EdgeFilterMode::Blended)
                .edge_count(),
            2
        );
        let raw = blended.filter_edges(3.0, EdgeFilterMode::RawCount);
        assert_eq!(raw.edge_count(), 1);
        assert_eq!(raw.edges()[0].count, 4);
    }

    #[test]
    fn prune_cases() {
        let tri =
            CoPreferenceGraph::from_counts(items(4), &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let pruned = tri.prune_isolated();
        assert_eq!(pruned.item_count(), 3);
        assert_eq!(pruned.edge_count(), 3);

        let isolated = CoPreferenceGraph::from_counts(items(3), &[]).unwrap();
        assert_eq!(isolated.prune_isolated().item_count(), 0);

        let path = with_weights(&[2.0, 5.0]);
        let out = path
            .filter_edges(3.0, EdgeFilterMode::Blended)
            .prune_isolated();
        assert_eq!(
            out.items(),
            &["perfume_1".to_string(), "perfume_2".to_string()]
        );
        assert_eq!(out.edge_count(), 1);
        assert_eq!((out.edges()[0].a, out.edges()[0].b), (0, 1));
    }

    #[test]
    fn normalization_cases() {
        let single = with_weights(&[7.5]).normalize_weights();
        assert_eq!(single.edges()[0].weight, 7.5);

        // node 0 has degree 3, node 1 has degree 4
        let mut g = CoPreferenceGraph::from_counts(
            items(6),
            &[
                (0, 1, 1),
                (0, 2, 1),
                (0, 3, 1),
                (1, 2, 1),
                (1, 4, 1),
                (1, 5, 1),
            ],
        )
        .unwrap();
        g.edges[0].weight = 12.0;
        let n = g.normalize_weights();
        assert_eq!(n.edges()[0].weight, 1.0);

        let star =
            CoPreferenceGraph::from_counts(items(4), &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        for e in star.normalize_weights().edges() {
            assert!((e.weight - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn projection_matches_direct_count(rows in proptest::collection::vec(
            proptest::collection::vec(any::<bool>(), 1..=12), 1..=12)) {
            let width = rows.iter().map(Vec::len).min().unwrap();
            let rows: Vec<Vec<bool>> = rows.into_iter().map(|r| r[..width].to_vec()).collect();
            let b = bipartite_from_matrix(&rows);
            let g = project_bipartite(&b);
            let col = |id: &str| id.trim_start_matches("perfume_").parse::<usize>().unwrap();
            let mut seen = 0;
            for e in g.edges() {
                prop_assert!(e.a < e.b);
                let (j, k) = (col(&g.items()[e.a]), col(&g.items()[e.b]));
                let direct = rows.iter().filter(|r| r[j] && r[k]).count();
                prop_assert_eq!(e.count as usize, direct);
                let deg = b.item_degrees();
                prop_assert!(e.count as usize <= deg[e.a].min(deg[e.b]));
                seen += 1;
            }
            let expected_pairs = (0..width).flat_map(|j| (j + 1..width).map(move |k| (j, k)))
                .filter(|&(j, k)| rows.iter().any(|r| r[j] && r[k])).count();
            prop_assert_eq!(seen, expected_pairs);
        }

        #[test]
        fn blend_strictly_monotone(rj in 0.0f64..10.0, rk in 0.0f64..10.0, c in 1u32..100, d in 0.001f64..1.0) {
            let k = BlendCoefficients::default();
            let base = k.weight(rj, rk, c);
            prop_assert!(k.weight(rj + d, rk, c) > base);
            prop_assert!(k.weight(rj, rk + d, c) > base);
            prop_assert!(k.weight(rj, rk, c + 1) > base);
        }

        #[test]
        fn normalization_preserves_edge_set(edges in proptest::collection::btree_set((0usize..8, 0usize..8), 0..20)) {
            let edges: Vec<_> = edges.into_iter().filter(|(a, b)| a < b).map(|(a, b)| (a, b, 2)).collect();
            let g = CoPreferenceGraph::from_counts(items(8), &edges).unwrap().prune_isolated();
            let n = g.normalize_weights();
            prop_assert_eq!(g.edge_count(), n.edge_count());
            for (x, y) in g.edges().iter().zip(n.edges()) {
                prop_assert_eq!((x.a, x.b, x.count), (y.a, y.b, y.count));
                prop_assert!(y.weight > 0.0);
            }
        }
    }
}
