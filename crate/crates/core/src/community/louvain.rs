//! Multilevel modularity optimization (Louvain).
//!
//! Phase one moves single nodes into the neighboring community with the
//! largest gain
//!
//! ```text
//! ΔQ(i → C) ∝ k_i,C − γ · Σ_tot,C · k_i / 2m
//! ```
//!
//! until no move helps. Phase two collapses every community into a
//! super-node (internal weight becomes a self-loop) and the process repeats
//! on the smaller graph until a level makes no move at all.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::community::{check_input, AlgorithmParams, CommunityReport};
use crate::error::Result;
use crate::graph::{modularity_with_resolution, Partition, WeightedGraph};

/// Graph at one aggregation level. Degrees count a self-loop twice.
struct Level {
    adjacency: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
    degree: Vec<f64>,
}

impl Level {
    fn from_graph(graph: &WeightedGraph) -> Self {
        let n = graph.node_count();
        Level {
            adjacency: (0..n).map(|i| graph.neighbors(i).to_vec()).collect(),
            loops: vec![0.0; n],
            degree: graph.degrees().to_vec(),
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// Collapses nodes by `community` (labels `0..c`).
    fn aggregate(&self, community: &[usize], c: usize) -> Level {
        let mut loops = vec![0.0; c];
        let mut degree = vec![0.0; c];
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); c];
        for u in 0..self.len() {
            let cu = community[u];
            loops[cu] += self.loops[u];
            degree[cu] += self.degree[u];
            for &(v, w) in &self.adjacency[u] {
                let cv = community[v];
                if cu == cv {
                    // each internal edge is seen from both ends
                    loops[cu] += w / 2.0;
                } else {
                    *maps[cu].entry(cv).or_default() += w;
                }
            }
        }
        Level {
            adjacency: maps.into_iter().map(|m| m.into_iter().collect()).collect(),
            loops,
            degree,
        }
    }
}

/// Runs local moves on `level`; returns the community of every node and
/// whether anything moved.
fn local_moves(
    level: &Level,
    two_m: f64,
    resolution: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, bool) {
    let n = level.len();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total: Vec<f64> = level.degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut link = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved_any = false;
    loop {
        let mut moved = false;
        for &u in &order {
            let k = level.degree[u];
            let own = community[u];
            for &(v, w) in &level.adjacency[u] {
                let c = community[v];
                if link[c] == 0.0 {
                    touched.push(c);
                }
                link[c] += w;
            }
            total[own] -= k;

            let gain = |c: usize, link: &[f64]| link[c] - resolution * total[c] * k / two_m;
            let mut best = own;
            let mut best_gain = gain(own, &link);
            let eps = 1e-12 * k.max(f64::MIN_POSITIVE);
            for &c in &touched {
                let g = gain(c, &link);
                if g > best_gain + eps {
                    best = c;
                    best_gain = g;
                }
            }
            for &c in &touched {
                link[c] = 0.0;
            }
            link[own] = 0.0;
            touched.clear();

            total[best] += k;
            if best != own {
                community[u] = best;
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    (community, moved_any)
}

/// Louvain communities with resolution `params.resolution`.
///
/// Node visit order at each level is shuffled by a generator seeded from
/// `params.seed`, so results are reproducible per seed.
pub fn louvain(graph: &WeightedGraph, params: &AlgorithmParams) -> Result<CommunityReport> {
    check_input(graph, params)?;
    let two_m = 2.0 * graph.total_weight();
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut membership: Vec<usize> = (0..n).collect();
    let mut trace = Vec::new();
    if two_m > 0.0 {
        trace.push(modularity_with_resolution(
            graph,
            &Partition::singletons(n),
            params.resolution,
        )?);
        let mut level = Level::from_graph(graph);
        loop {
            let (community, moved) = local_moves(&level, two_m, params.resolution, &mut rng);
            if !moved {
                break;
            }
            let canon = Partition::new(community).canonical();
            let c = canon.community_count();
            for m in membership.iter_mut() {
                *m = canon.label(*m);
            }
            trace.push(modularity_with_resolution(
                graph,
                &Partition::new(membership.clone()),
                params.resolution,
            )?);
            level = level.aggregate(canon.labels(), c);
        }
    }

    CommunityReport::new(graph, params, Partition::new(membership), trace)
}
