use crate::graph::Partition;

/// Merge history of an agglomerative algorithm starting from singletons.
///
/// `merges[s]` joins the communities represented by two node positions;
/// `modularity[s]` is the modularity before merge `s`, so the vector is one
/// longer than `merges`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub nodes: usize,
    pub merges: Vec<(usize, usize)>,
    pub modularity: Vec<f64>,
}

impl Dendrogram {
    /// Number of merges applied at the first modularity maximum.
    pub fn best_step(&self) -> usize {
        let mut best = 0;
        for (s, &q) in self.modularity.iter().enumerate() {
            if q > self.modularity[best] {
                best = s;
            }
        }
        best
    }

    /// Partition after applying the first `steps` merges.
    pub fn partition_at(&self, steps: usize) -> Partition {
        let mut parent: Vec<usize> = (0..self.nodes).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.merges[..steps] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let labels = (0..self.nodes).map(|x| find(&mut parent, x)).collect();
        Partition::new(labels).canonical()
    }

    pub fn best_partition(&self) -> Partition {
        self.partition_at(self.best_step())
    }
}
