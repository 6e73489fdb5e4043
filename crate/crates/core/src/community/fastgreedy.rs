//! Greedy agglomerative modularity maximization (Clauset–Newman–Moore).
//!
//! Starting from singletons, the pair of adjacent communities with the
//! largest `ΔQ = 2 (e_ij − a_i a_j)` is merged, where `e_ij` is the share of
//! edge weight between them and `a_i` the share of total degree in `i`.
//! Merging continues until no adjacent pairs remain; the dendrogram is cut
//! at its modularity maximum. Ties go to the lowest `(i, j)` label pair.

use std::collections::BTreeMap;

use crate::community::{check_input, AlgorithmParams, CommunityReport, Dendrogram};
use crate::error::{Error, Result};
use crate::graph::{modularity, Partition, WeightedGraph};

#[derive(Clone, Copy)]
struct Best {
    dq: f64,
    partner: usize,
}

/// Full merge history; the caller picks the cut.
pub fn fast_greedy_dendrogram(graph: &WeightedGraph) -> Result<Dendrogram> {
    let n = graph.node_count();
    let two_m = 2.0 * graph.total_weight();
    if two_m <= 0.0 {
        return Err(Error::ModularityUndefined);
    }

    let mut a: Vec<f64> = graph.degrees().iter().map(|k| k / two_m).collect();
    let mut links: Vec<BTreeMap<usize, f64>> = (0..n)
        .map(|i| {
            graph
                .neighbors(i)
                .iter()
                .map(|&(j, w)| (j, w / two_m))
                .collect()
        })
        .collect();
    let mut active = vec![true; n];

    let delta = |e: f64, ai: f64, aj: f64| 2.0 * (e - ai * aj);
    let best_of = |i: usize, links: &[BTreeMap<usize, f64>], a: &[f64]| -> Option<Best> {
        let mut best: Option<Best> = None;
        for (&j, &e) in &links[i] {
            let dq = delta(e, a[i], a[j]);
            if best.is_none_or(|b| dq > b.dq) {
                best = Some(Best { dq, partner: j });
            }
        }
        best
    };
    let mut cache: Vec<Option<Best>> = (0..n).map(|i| best_of(i, &links, &a)).collect();

    let mut q = modularity(graph, &Partition::singletons(n))?;
    let mut history = vec![q];
    let mut merges = Vec::new();

    loop {
        let mut choice: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            if let Some(b) = cache[i] {
                let pair = (i.min(b.partner), i.max(b.partner));
                let better = match choice {
                    None => true,
                    Some((dq, lo, hi)) => b.dq > dq || (b.dq == dq && pair < (lo, hi)),
                };
                if better {
                    choice = Some((b.dq, pair.0, pair.1));
                }
            }
        }
        let Some((dq, keep, gone)) = choice else {
            break;
        };

        let moved = std::mem::take(&mut links[gone]);
        links[keep].remove(&gone);
        for (k, e) in moved {
            if k == keep {
                continue;
            }
            let merged = {
                let slot = links[keep].entry(k).or_insert(0.0);
                *slot += e;
                *slot
            };
            links[k].remove(&gone);
            links[k].insert(keep, merged);
        }
        a[keep] += a[gone];
        a[gone] = 0.0;
        active[gone] = false;
        cache[gone] = None;

        cache[keep] = best_of(keep, &links, &a);
        let neighbors: Vec<usize> = links[keep].keys().copied().collect();
        for k in neighbors {
            cache[k] = best_of(k, &links, &a);
        }

        q += dq;
        history.push(q);
        merges.push((keep, gone));
    }

    Ok(Dendrogram {
        nodes: n,
        merges,
        modularity: history,
    })
}

pub fn fast_greedy(graph: &WeightedGraph, params: &AlgorithmParams) -> Result<CommunityReport> {
    check_input(graph, params)?;
    let dendrogram = fast_greedy_dendrogram(graph)?;
    let partition = dendrogram.best_partition();
    CommunityReport::new(graph, params, partition, dendrogram.modularity)
}
