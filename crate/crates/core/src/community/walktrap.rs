//! Random-walk agglomeration (Pons–Latapy Walktrap).
//!
//! Each node `i` is described by the distribution `P^t_i·` of a `t`-step
//! walk from `i` under the transition matrix `D⁻¹W`. Communities are
//! compared through the degree-scaled distance
//!
//! ```text
//! r²(C1, C2) = Σ_k (P^t_C1,k − P^t_C2,k)² / d(k)
//! ```
//!
//! and the adjacent pair with the smallest Ward increase
//! `Δσ = (1/n) · |C1||C2| / (|C1| + |C2|) · r²` is merged. The merge tree is
//! cut where modularity peaks.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::community::{check_input, AlgorithmParams, CommunityReport, Dendrogram};
use crate::error::{Error, Result};
use crate::graph::{modularity, Partition, WeightedGraph};

/// Rows `D^{-1/2} P^t_i·` for every node, row-major `n × n`.
fn walk_profiles(graph: &WeightedGraph, t: usize) -> Vec<Vec<f64>> {
    let n = graph.node_count();
    let deg = graph.degrees();
    (0..n)
        .into_par_iter()
        .map(|start| {
            let mut p = vec![0.0; n];
            if deg[start] == 0.0 {
                return p;
            }
            p[start] = 1.0;
            let mut next = vec![0.0; n];
            for _ in 0..t {
                next.iter_mut().for_each(|x| *x = 0.0);
                for (j, &pj) in p.iter().enumerate() {
                    if pj == 0.0 {
                        continue;
                    }
                    let share = pj / deg[j];
                    for &(k, w) in graph.neighbors(j) {
                        next[k] += share * w;
                    }
                }
                std::mem::swap(&mut p, &mut next);
            }
            for (x, &d) in p.iter_mut().zip(deg) {
                *x = if d > 0.0 { *x / d.sqrt() } else { 0.0 };
            }
            p
        })
        .collect()
}

struct Link {
    /// Edge weight between the two communities over 2m.
    e: f64,
    sigma: f64,
}

/// Full merge history for walks of length `t`.
pub fn walktrap_dendrogram(graph: &WeightedGraph, t: usize) -> Result<Dendrogram> {
    let n = graph.node_count();
    let two_m = 2.0 * graph.total_weight();
    if two_m <= 0.0 {
        return Err(Error::ModularityUndefined);
    }
    let mut profile = walk_profiles(graph, t);
    let mut size = vec![1usize; n];
    let mut a: Vec<f64> = graph.degrees().iter().map(|k| k / two_m).collect();
    let mut active = vec![true; n];

    let ward = |p1: &[f64], s1: usize, p2: &[f64], s2: usize| -> f64 {
        let r2: f64 = p1.iter().zip(p2).map(|(x, y)| (x - y) * (x - y)).sum();
        (s1 * s2) as f64 / (s1 + s2) as f64 * r2 / n as f64
    };

    let mut links: Vec<BTreeMap<usize, Link>> = (0..n).map(|_| BTreeMap::new()).collect();
    for e in graph.edges() {
        let sigma = ward(&profile[e.source], 1, &profile[e.target], 1);
        let w = e.weight / two_m;
        links[e.source].insert(e.target, Link { e: w, sigma });
        links[e.target].insert(e.source, Link { e: w, sigma });
    }
    let best_of = |i: usize, links: &[BTreeMap<usize, Link>]| -> Option<(f64, usize)> {
        let mut best: Option<(f64, usize)> = None;
        for (&j, l) in &links[i] {
            if best.is_none_or(|b| l.sigma < b.0) {
                best = Some((l.sigma, j));
            }
        }
        best
    };
    let mut cache: Vec<Option<(f64, usize)>> = (0..n).map(|i| best_of(i, &links)).collect();

    let mut q = modularity(graph, &Partition::singletons(n))?;
    let mut history = vec![q];
    let mut merges = Vec::new();

    loop {
        let mut choice: Option<(f64, usize, usize)> = None;
        for i in (0..n).filter(|&i| active[i]) {
            if let Some((sigma, j)) = cache[i] {
                let pair = (i.min(j), i.max(j));
                let better = match choice {
                    None => true,
                    Some((s, lo, hi)) => sigma < s || (sigma == s && pair < (lo, hi)),
                };
                if better {
                    choice = Some((sigma, pair.0, pair.1));
                }
            }
        }
        let Some((_, keep, gone)) = choice else {
            break;
        };

        let e_between = links[keep][&gone].e;
        q += 2.0 * (e_between - a[keep] * a[gone]);

        let (sk, sg) = (size[keep] as f64, size[gone] as f64);
        let gone_profile = std::mem::take(&mut profile[gone]);
        for (x, y) in profile[keep].iter_mut().zip(&gone_profile) {
            *x = (sk * *x + sg * y) / (sk + sg);
        }
        size[keep] += size[gone];
        a[keep] += a[gone];
        a[gone] = 0.0;
        active[gone] = false;
        cache[gone] = None;

        let moved = std::mem::take(&mut links[gone]);
        links[keep].remove(&gone);
        for (k, l) in moved {
            if k == keep {
                continue;
            }
            links[keep]
                .entry(k)
                .or_insert(Link { e: 0.0, sigma: 0.0 })
                .e += l.e;
            links[k].remove(&gone);
        }
        let neighbors: Vec<usize> = links[keep].keys().copied().collect();
        let sigmas: Vec<(usize, f64)> = neighbors
            .par_iter()
            .map(|&k| (k, ward(&profile[keep], size[keep], &profile[k], size[k])))
            .collect();
        for (k, sigma) in sigmas {
            let e = {
                let l = links[keep].get_mut(&k).expect("neighbor");
                l.sigma = sigma;
                l.e
            };
            links[k].insert(keep, Link { e, sigma });
        }
        cache[keep] = best_of(keep, &links);
        for k in neighbors {
            cache[k] = best_of(k, &links);
        }

        history.push(q);
        merges.push((keep, gone));
    }

    Ok(Dendrogram {
        nodes: n,
        merges,
        modularity: history,
    })
}

pub fn walktrap(graph: &WeightedGraph, params: &AlgorithmParams) -> Result<CommunityReport> {
    check_input(graph, params)?;
    let dendrogram = walktrap_dendrogram(graph, params.walk_length)?;
    let partition = dendrogram.best_partition();
    CommunityReport::new(graph, params, partition, dendrogram.modularity)
}
