use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::linalg::Embedding;

pub const MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone)]
pub struct KMeansResult {
    /// Canonical cluster labels, one per point.
    pub partition: Partition,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares after each Lloyd iteration.
    pub inertia: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's k-means with k-means++ seeding.
///
/// Iterates until the assignment stops changing or [`MAX_ITERATIONS`] is
/// reached. A cluster that goes empty is re-seeded with the point farthest
/// from its current centroid. Deterministic for a given `seed`.
pub fn kmeans(points: &Embedding, k: usize, seed: u64) -> Result<KMeansResult> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::TooManyClusters { k, points: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(points, k, &mut rng);
    let mut assignment = vec![usize::MAX; n];
    let mut inertia = Vec::new();

    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for (i, slot) in assignment.iter_mut().enumerate() {
            let p = points.row(i);
            let mut best = (0, f64::INFINITY);
            for (c, centroid) in centroids.iter().enumerate() {
                let d = sq_dist(p, centroid);
                if d < best.1 {
                    best = (c, d);
                }
            }
            if *slot != best.0 {
                *slot = best.0;
                changed = true;
            }
        }
        if !changed && !inertia.is_empty() {
            break;
        }

        reseed_empty(points, &centroids, &mut assignment, k);
        centroids = means(points, &assignment, k);
        inertia.push(
            (0..n)
                .map(|i| sq_dist(points.row(i), &centroids[assignment[i]]))
                .sum(),
        );
    }

    Ok(KMeansResult {
        partition: Partition::new(assignment).canonical(),
        centroids,
        inertia,
    })
}

fn plus_plus_init(points: &Embedding, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.rows();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| sq_dist(points.row(i), points.row(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in nearest.iter().enumerate() {
                if d > 0.0 && target < d {
                    pick = i;
                    break;
                }
                target -= d;
            }
            while nearest[pick] == 0.0 {
                pick -= 1;
            }
            pick
        } else {
            // every point coincides with a center; take the first unused one
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n")
        };
        chosen.push(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(i), points.row(next)));
        }
    }
    chosen.iter().map(|&i| points.row(i).to_vec()).collect()
}

fn reseed_empty(points: &Embedding, centroids: &[Vec<f64>], assignment: &mut [usize], k: usize) {
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assignment.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let farthest = (0..points.rows())
            .filter(|&i| sizes[assignment[i]] > 1)
            .map(|i| (i, sq_dist(points.row(i), &centroids[assignment[i]])))
            .fold(
                (usize::MAX, -1.0),
                |best, x| if x.1 > best.1 { x } else { best },
            )
            .0;
        if farthest == usize::MAX {
            return;
        }
        assignment[farthest] = empty;
    }
}

fn means(points: &Embedding, assignment: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = points.cols();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (i, &a) in assignment.iter().enumerate() {
        counts[a] += 1;
        for (s, x) in sums[a].iter_mut().zip(points.row(i)) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            s.iter_mut().for_each(|x| *x /= c as f64);
        }
    }
    sums
}
