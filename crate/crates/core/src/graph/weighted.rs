use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// An undirected edge stored once with `source < target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// Weighted undirected simple graph over string-identified nodes.
///
/// Each edge is stored once in [`WeightedGraph::edges`]; the adjacency index
/// mirrors it in both directions for neighbor lookups. Weights are strictly
/// positive and there are no self-loops. The graph is immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    nodes: Vec<String>,
    names: Vec<Option<String>>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
    degrees: Vec<f64>,
    total_weight: f64,
}

impl WeightedGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Builds a graph from `(a, b, weight)` triples, adding nodes as they
    /// first appear.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S, f64)]) -> Result<Self> {
        let mut builder = GraphBuilder::default();
        for (a, b, w) in edges {
            let a = builder.ensure_node(a.as_ref());
            let b = builder.ensure_node(b.as_ref());
            builder.add_edge(a, b, *w)?;
        }
        builder.build()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, index: usize) -> &str {
        &self.nodes[index]
    }

    /// Display name, falling back to the identifier.
    pub fn node_name(&self, index: usize) -> &str {
        self.names[index].as_deref().unwrap_or(&self.nodes[index])
    }

    pub fn explicit_name(&self, index: usize) -> Option<&str> {
        self.names[index].as_deref()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `index` with edge weights, sorted by neighbor index.
    pub fn neighbors(&self, index: usize) -> &[(usize, f64)] {
        &self.adjacency[index]
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        let adj = &self.adjacency[a];
        adj.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|pos| adj[pos].1)
    }

    /// Weighted degree by node position.
    pub fn degree(&self, index: usize) -> f64 {
        self.degrees[index]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Sum of weights of the edges incident to `id`.
    pub fn weighted_degree(&self, id: &str) -> Result<f64> {
        self.index_of(id)
            .map(|i| self.degrees[i])
            .ok_or_else(|| Error::NodeNotFound(id.to_string()))
    }

    /// Total edge weight `m`; the sum of all weighted degrees is `2m`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Same topology with every weight replaced by 1.
    pub fn binarized(&self) -> WeightedGraph {
        self.map_weights(|_| 1.0)
    }

    pub fn scaled(&self, factor: f64) -> WeightedGraph {
        self.map_weights(|w| w * factor)
    }

    fn map_weights(&self, f: impl Fn(f64) -> f64) -> WeightedGraph {
        let mut builder = self.empty_builder();
        for e in &self.edges {
            builder.edges.push(Edge {
                weight: f(e.weight),
                ..*e
            });
        }
        builder.build().expect("mapping preserves graph invariants")
    }

    fn empty_builder(&self) -> GraphBuilder {
        GraphBuilder {
            nodes: self.nodes.clone(),
            names: self.names.clone(),
            index: self.index.clone(),
            edges: Vec::with_capacity(self.edges.len()),
        }
    }

    /// Component label per node, numbered in order of first appearance.
    pub fn connected_components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adjacency[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Subgraph induced by `members` (positions in this graph), keeping their order.
    pub fn induced_subgraph(&self, members: &[usize]) -> WeightedGraph {
        let mut local = vec![usize::MAX; self.node_count()];
        let mut builder = GraphBuilder::default();
        for (i, &m) in members.iter().enumerate() {
            local[m] = i;
            builder
                .add_node_with_name(&self.nodes[m], self.names[m].clone())
                .expect("members are distinct");
        }
        for e in &self.edges {
            let (a, b) = (local[e.source], local[e.target]);
            if a != usize::MAX && b != usize::MAX {
                builder.edges.push(Edge {
                    source: a.min(b),
                    target: a.max(b),
                    weight: e.weight,
                });
            }
        }
        builder
            .build()
            .expect("subgraph preserves graph invariants")
    }
}

/// Accumulates nodes and edges, then validates and freezes them into a
/// [`WeightedGraph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    nodes: Vec<String>,
    names: Vec<Option<String>>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn add_node(&mut self, id: &str) -> Result<usize> {
        self.add_node_with_name(id, None)
    }

    pub fn add_node_with_name(&mut self, id: &str, name: Option<String>) -> Result<usize> {
        if self.index.contains_key(id) {
            return Err(Error::DuplicateNode(id.to_string()));
        }
        let i = self.nodes.len();
        self.nodes.push(id.to_string());
        self.names.push(name);
        self.index.insert(id.to_string(), i);
        Ok(i)
    }

    /// Returns the position of `id`, adding it if absent.
    pub fn ensure_node(&mut self, id: &str) -> usize {
        match self.index.get(id) {
            Some(&i) => i,
            None => self.add_node(id).expect("checked absent"),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Adds an undirected edge between node positions. Zero weights are
    /// dropped; negative or non-finite weights and self-loops are rejected.
    pub fn add_edge(&mut self, a: usize, b: usize, weight: f64) -> Result<()> {
        if a == b {
            return Err(Error::SelfLoop(self.nodes[a].clone()));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidWeight {
                source_node: self.nodes[a].clone(),
                target_node: self.nodes[b].clone(),
                weight,
            });
        }
        if weight == 0.0 {
            return Ok(());
        }
        self.edges.push(Edge {
            source: a.min(b),
            target: a.max(b),
            weight,
        });
        Ok(())
    }

    pub fn build(mut self) -> Result<WeightedGraph> {
        self.edges.sort_by_key(|e| (e.source, e.target));
        if let Some(w) = self
            .edges
            .windows(2)
            .find(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target))
        {
            return Err(Error::DuplicateEdge(
                self.nodes[w[0].source].clone(),
                self.nodes[w[0].target].clone(),
            ));
        }

        let n = self.nodes.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut degrees = vec![0.0; n];
        let mut total_weight = 0.0;
        for e in &self.edges {
            adjacency[e.source].push((e.target, e.weight));
            adjacency[e.target].push((e.source, e.weight));
            degrees[e.source] += e.weight;
            degrees[e.target] += e.weight;
            total_weight += e.weight;
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|&(v, _)| v);
        }

        Ok(WeightedGraph {
            nodes: self.nodes,
            names: self.names,
            index: self.index,
            edges: self.edges,
            adjacency,
            degrees,
            total_weight,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_edges(&[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]).unwrap()
    }

    #[test]
    fn weighted_degree_single_edge() {
        let g = WeightedGraph::from_edges(&[("a", "b", 1.0)]).unwrap();
        assert_eq!(g.weighted_degree("a").unwrap(), 1.0);
        assert_eq!(g.weighted_degree("b").unwrap(), 1.0);
    }

    #[test]
    fn weighted_degree_triangle() {
        let g = triangle();
        for id in ["a", "b", "c"] {
            assert_eq!(g.weighted_degree(id).unwrap(), 2.0);
        }
    }

    #[test]
    fn weighted_degree_sums_incident_weights() {
        let g = WeightedGraph::from_edges(&[("x", "a", 2.5), ("x", "b", 3.5)]).unwrap();
        assert!((g.weighted_degree("x").unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_degree_unknown_node() {
        let err = triangle().weighted_degree("zz").unwrap_err();
        assert!(err.to_string().contains("node not found"));
    }

    #[test]
    fn lookup_is_symmetric() {
        let g = WeightedGraph::from_edges(&[("a", "b", 2.0), ("c", "a", 4.0)]).unwrap();
        let (a, c) = (g.index_of("a").unwrap(), g.index_of("c").unwrap());
        assert_eq!(g.weight(a, c), Some(4.0));
        assert_eq!(g.weight(c, a), Some(4.0));
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.total_weight(), 6.0);
    }

    #[test]
    fn rejects_self_loops_and_bad_weights() {
        let mut b = GraphBuilder::default();
        let x = b.add_node("x").unwrap();
        let y = b.add_node("y").unwrap();
        assert!(matches!(b.add_edge(x, x, 1.0), Err(Error::SelfLoop(_))));
        assert!(b.add_edge(x, y, -1.0).is_err());
        assert!(b.add_edge(x, y, f64::NAN).is_err());
        b.add_edge(x, y, 0.0).unwrap();
        assert_eq!(b.build().unwrap().edge_count(), 0);
    }

    #[test]
    fn rejects_duplicate_edges() {
        let err = WeightedGraph::from_edges(&[("a", "b", 1.0), ("b", "a", 2.0)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateEdge(..)));
    }

    #[test]
    fn components_in_first_appearance_order() {
        let g = WeightedGraph::from_edges(&[("a", "b", 1.0), ("c", "d", 1.0), ("b", "e", 1.0)])
            .unwrap();
        assert_eq!(g.connected_components(), vec![0, 0, 1, 1, 0]);
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = triangle();
        let sub = g.induced_subgraph(&[2, 0]);
        assert_eq!(sub.nodes(), &["c".to_string(), "a".to_string()]);
        assert_eq!(sub.edge_count(), 1);
        assert_eq!(sub.weight(0, 1), Some(1.0));
    }
}
