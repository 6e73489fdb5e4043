//! Potts-model community detection by simulated annealing.
//!
//! Minimizes the Reichardt–Bornholdt Hamiltonian with a configuration null
//! model,
//!
//! ```text
//! H(s) = − Σ_{i<j} (W_ij − γ k_i k_j / 2m) δ(s_i, s_j)
//! ```
//!
//! over assignments of at most `q` spin states. Each sweep visits nodes in a
//! seeded random order and redraws the spin from its heat-bath distribution
//! at the current temperature; the temperature cools geometrically. Once
//! annealing stops, zero-temperature refinement alternates greedy
//! single-spin sweeps with merges of two whole spin groups until neither
//! lowers the energy. The merges matter for small components, where
//! annealing with many spin states tends to freeze a group into pieces.
//!
//! Disconnected graphs are solved one component at a time with disjoint
//! labels. Every component keeps the null model of the whole graph (its
//! `m`), so the optimum is the same as for the joint problem.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::community::{check_input, AlgorithmParams, CommunityReport};
use crate::error::Result;
use crate::graph::{Partition, WeightedGraph};

const MAX_QUENCH_SWEEPS: usize = 1000;
/// Sweeps over which the acceptance rate is averaged for the stop rule.
const ACCEPTANCE_WINDOW: usize = 10;

/// `H` of `partition` on `graph` for the given `gamma`, in O(n + m).
pub fn hamiltonian(graph: &WeightedGraph, partition: &Partition, gamma: f64) -> f64 {
    let two_m = 2.0 * graph.total_weight();
    let canon = partition.canonical();
    let c = canon.community_count();
    let mut internal = 0.0;
    for e in graph.edges() {
        if canon.label(e.source) == canon.label(e.target) {
            internal += e.weight;
        }
    }
    if two_m == 0.0 {
        return -internal;
    }
    let mut total = vec![0.0; c];
    let mut squares = vec![0.0; c];
    for i in 0..graph.node_count() {
        let k = graph.degree(i);
        total[canon.label(i)] += k;
        squares[canon.label(i)] += k * k;
    }
    let pairs: f64 = total
        .iter()
        .zip(&squares)
        .map(|(t, s)| (t * t - s) / 2.0)
        .sum();
    -(internal - gamma * pairs / two_m)
}

struct Anneal<'a> {
    graph: &'a WeightedGraph,
    gamma: f64,
    two_m: f64,
    spins: Vec<usize>,
    /// Total degree per spin state.
    state_degree: Vec<f64>,
    /// Scratch: edge weight from the current node to each state.
    link: Vec<f64>,
}

impl<'a> Anneal<'a> {
    fn new(
        graph: &'a WeightedGraph,
        gamma: f64,
        two_m: f64,
        q: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let spins: Vec<usize> = (0..graph.node_count())
            .map(|_| rng.random_range(0..q))
            .collect();
        let mut state_degree = vec![0.0; q];
        for (i, &s) in spins.iter().enumerate() {
            state_degree[s] += graph.degree(i);
        }
        Anneal {
            graph,
            gamma,
            two_m,
            spins,
            state_degree,
            link: vec![0.0; q],
        }
    }

    /// Fills `link` for node `i` and removes `i` from its state's degree.
    fn detach(&mut self, i: usize) {
        self.link.iter_mut().for_each(|x| *x = 0.0);
        for &(j, w) in self.graph.neighbors(i) {
            self.link[self.spins[j]] += w;
        }
        self.state_degree[self.spins[i]] -= self.graph.degree(i);
    }

    fn attach(&mut self, i: usize, s: usize) -> bool {
        self.state_degree[s] += self.graph.degree(i);
        let changed = self.spins[i] != s;
        self.spins[i] = s;
        changed
    }

    /// Energy gain (negative energy) of putting the detached node `i` in state `s`.
    fn gain(&self, i: usize, s: usize) -> f64 {
        self.link[s] - self.gamma * self.graph.degree(i) * self.state_degree[s] / self.two_m
    }

    fn heat_bath_sweep(
        &mut self,
        order: &[usize],
        temperature: f64,
        rng: &mut ChaCha8Rng,
        weights: &mut Vec<f64>,
    ) -> usize {
        let q = self.link.len();
        let mut changes = 0;
        for &i in order {
            self.detach(i);
            weights.clear();
            let gains: Vec<f64> = (0..q).map(|s| self.gain(i, s)).collect();
            let top = gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            weights.extend(gains.iter().map(|g| ((g - top) / temperature).exp()));
            let total: f64 = weights.iter().sum();
            let mut target = rng.random::<f64>() * total;
            let mut pick = q - 1;
            for (s, &w) in weights.iter().enumerate() {
                if target < w {
                    pick = s;
                    break;
                }
                target -= w;
            }
            if self.attach(i, pick) {
                changes += 1;
            }
        }
        changes
    }

    /// Merges the pair of occupied states whose union lowers the energy the
    /// most. Returns whether a merge happened.
    fn merge_best_pair(&mut self) -> bool {
        let q = self.link.len();
        let mut between = vec![0.0; q * q];
        for e in self.graph.edges() {
            let (a, b) = (self.spins[e.source], self.spins[e.target]);
            if a != b {
                between[a.min(b) * q + a.max(b)] += e.weight;
            }
        }
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..q {
            for b in a + 1..q {
                let w = between[a * q + b];
                if w == 0.0 {
                    continue;
                }
                // energy change of the merge is -(gain)
                let gain =
                    w - self.gamma * self.state_degree[a] * self.state_degree[b] / self.two_m;
                let eps = 1e-12 * w;
                if gain > eps && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, a, b));
                }
            }
        }
        let Some((_, keep, gone)) = best else {
            return false;
        };
        for s in self.spins.iter_mut().filter(|s| **s == gone) {
            *s = keep;
        }
        self.state_degree[keep] += self.state_degree[gone];
        self.state_degree[gone] = 0.0;
        true
    }

    /// Moves every node to its best state (current state wins ties).
    fn greedy_sweep(&mut self, order: &[usize]) -> usize {
        let q = self.link.len();
        let mut changes = 0;
        for &i in order {
            self.detach(i);
            let own = self.spins[i];
            let mut best = (own, self.gain(i, own));
            let eps = 1e-12 * self.graph.degree(i).max(f64::MIN_POSITIVE);
            for s in 0..q {
                let g = self.gain(i, s);
                if g > best.1 + eps {
                    best = (s, g);
                }
            }
            if self.attach(i, best.0) {
                changes += 1;
            }
        }
        changes
    }
}

/// Anneals one connected component under a null model with total degree
/// `two_m`; returns the spins when annealing stopped and after the quench.
fn anneal_component(
    graph: &WeightedGraph,
    two_m: f64,
    params: &AlgorithmParams,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, Vec<usize>) {
    let n = graph.node_count();
    if n == 1 || graph.total_weight() == 0.0 {
        return (vec![0; n], vec![0; n]);
    }
    let schedule = &params.anneal;
    let q = params.spin_states;
    let mut state = Anneal::new(graph, params.gamma, two_m, q, rng);
    let mean_degree = 2.0 * graph.total_weight() / n as f64;
    let mut temperature = schedule.start_temperature * mean_degree;
    let mut order: Vec<usize> = (0..n).collect();
    let mut weights = Vec::with_capacity(q);

    let mut recent = std::collections::VecDeque::with_capacity(ACCEPTANCE_WINDOW);
    for _ in 0..schedule.max_sweeps {
        order.shuffle(rng);
        let changes = state.heat_bath_sweep(&order, temperature, rng, &mut weights);
        temperature *= schedule.cooling;
        if recent.len() == ACCEPTANCE_WINDOW {
            recent.pop_front();
        }
        recent.push_back(changes);
        let accepted: usize = recent.iter().sum();
        let visited = (recent.len() * n) as f64;
        if recent.len() == ACCEPTANCE_WINDOW
            && (accepted as f64) < schedule.min_acceptance * visited
        {
            break;
        }
    }
    let annealed = state.spins.clone();
    loop {
        for _ in 0..MAX_QUENCH_SWEEPS {
            order.shuffle(rng);
            if state.greedy_sweep(&order) == 0 {
                break;
            }
        }
        if !state.merge_best_pair() {
            break;
        }
    }
    (annealed, state.spins)
}

pub fn spinglass(graph: &WeightedGraph, params: &AlgorithmParams) -> Result<CommunityReport> {
    check_input(graph, params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let two_m = 2.0 * graph.total_weight();
    let components = Partition::new(graph.connected_components()).communities();

    let n = graph.node_count();
    let mut annealed = vec![0; n];
    let mut labels = vec![0; n];
    let mut offset = 0;
    for members in components {
        let sub = graph.induced_subgraph(&members);
        let (hot, cold) = anneal_component(&sub, two_m, params, &mut rng);
        for (&node, (&h, &c)) in members.iter().zip(hot.iter().zip(&cold)) {
            annealed[node] = offset + h;
            labels[node] = offset + c;
        }
        offset += params.spin_states;
    }
    let trace = vec![
        hamiltonian(graph, &Partition::new(annealed), params.gamma),
        hamiltonian(graph, &Partition::new(labels.clone()), params.gamma),
    ];
    CommunityReport::new(graph, params, Partition::new(labels), trace)
}
