use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Assignment of every node (by position) to a community label.
///
/// Totality is structural: there is exactly one label per node position.
/// Labels are arbitrary until [`Partition::canonical`] renumbers them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    pub fn new(labels: Vec<usize>) -> Self {
        Partition { labels }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
        }
    }

    pub fn single_community(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    /// Builds a partition over `graph` from an id → label mapping, failing if
    /// any graph node is unassigned.
    pub fn from_assignment(
        graph: &WeightedGraph,
        assignment: &HashMap<String, usize>,
    ) -> Result<Self> {
        graph
            .nodes()
            .iter()
            .map(|id| {
                assignment
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::PartialPartition(id.clone()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Partition::new)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn community_count(&self) -> usize {
        let mut seen: Vec<usize> = self.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Relabels communities to `0..c` in order of first appearance.
    pub fn canonical(&self) -> Partition {
        let mut map = HashMap::new();
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0;
        for &l in &self.labels {
            if l == next {
                next += 1;
            } else if l > next {
                return false;
            }
        }
        true
    }

    /// Member positions of each community, indexed by canonical label.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let canon = self.canonical();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (node, &l) in canon.labels.iter().enumerate() {
            if l == out.len() {
                out.push(Vec::new());
            }
            out[l].push(node);
        }
        out
    }

    /// Same communities on a graph whose nodes were reordered so that old
    /// position `i` now sits at `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Partition {
        let mut labels = vec![0; self.labels.len()];
        for (old, &new) in order.iter().enumerate() {
            labels[new] = self.labels[old];
        }
        Partition { labels }
    }
}

/// Relabels `partition` to contiguous labels in first-appearance order.
pub fn canonicalize_partition(partition: &Partition) -> Partition {
    partition.canonical()
}

/// Normalized mutual information `2 I(A;B) / (H(A) + H(B))` between two
/// partitions of the same node set. Two trivial partitions score 1.
pub fn normalized_mutual_information(a: &Partition, b: &Partition) -> f64 {
    assert_eq!(a.len(), b.len(), "partitions must cover the same nodes");
    let n = a.len() as f64;
    if a.is_empty() {
        return 1.0;
    }
    let (a, b) = (a.canonical(), b.canonical());
    let ka = a.community_count();
    let kb = b.community_count();
    let mut joint = vec![0usize; ka * kb];
    let mut ca = vec![0usize; ka];
    let mut cb = vec![0usize; kb];
    for (&x, &y) in a.labels.iter().zip(&b.labels) {
        joint[x * kb + y] += 1;
        ca[x] += 1;
        cb[y] += 1;
    }
    let entropy = |counts: &[usize]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let (ha, hb) = (entropy(&ca), entropy(&cb));
    if ha + hb == 0.0 {
        return 1.0;
    }
    let mut mi = 0.0;
    for x in 0..ka {
        for y in 0..kb {
            let c = joint[x * kb + y];
            if c > 0 {
                let pxy = c as f64 / n;
                mi += pxy * (pxy * n * n / (ca[x] as f64 * cb[y] as f64)).ln();
            }
        }
    }
    (2.0 * mi / (ha + hb)).clamp(0.0, 1.0)
}
