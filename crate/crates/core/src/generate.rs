//! Seeded synthetic inputs: planted-partition graphs with known communities
//! and review corpora with latent taste groups.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Partition, WeightedGraph};
use crate::ingest::{Category, ReviewRecord, Sentiment};

/// `groups` blocks of `size` nodes; each intra-block pair is joined with
/// probability `p_in`, each inter-block pair with `p_out`, all with unit
/// weight. Returns the graph and the planted partition.
pub fn planted_partition(
    groups: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(WeightedGraph, Partition)> {
    for p in [p_in, p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "probability {p} outside [0, 1]"
            )));
        }
    }
    let n = groups * size;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = WeightedGraph::builder();
    for i in 0..n {
        b.add_node(&format!("n{i:04}"))?;
    }
    for i in 0..n {
        for j in i + 1..n {
            let p = if i / size == j / size { p_in } else { p_out };
            if rng.random::<f64>() < p {
                b.add_edge(i, j, 1.0)?;
            }
        }
    }
    let truth = Partition::new((0..n).map(|i| i / size).collect());
    Ok((b.build()?, truth))
}

/// Shape of a synthetic review corpus.
///
/// Every user belongs to one of `groups` taste groups, and items are split
/// evenly between the groups. A user writes between 1 and
/// `2 * mean_reviews - 1` reviews; each targets an item of the user's own
/// group with probability `loyalty` and a uniformly random item otherwise.
/// Reviews inside the group are positive with high votes; the rest are
/// negative with low votes. A share `noise` of reviews gets a mid-range
/// vote that leaves the text sentiment in place.
#[derive(Debug, Clone, PartialEq)]
pub struct ReviewCorpus {
    pub users: usize,
    pub items: usize,
    pub groups: usize,
    pub mean_reviews: usize,
    pub loyalty: f64,
    pub noise: f64,
    pub seed: u64,
}

impl Default for ReviewCorpus {
    fn default() -> Self {
        ReviewCorpus {
            users: 7000,
            items: 1100,
            groups: 10,
            mean_reviews: 6,
            loyalty: 0.85,
            noise: 0.1,
            seed: 0,
        }
    }
}

impl ReviewCorpus {
    pub fn item_group(&self, item: usize) -> usize {
        item * self.groups / self.items
    }

    pub fn generate(&self) -> Result<Vec<ReviewRecord>> {
        if self.groups == 0 || self.items < self.groups || self.users == 0 || self.mean_reviews == 0
        {
            return Err(Error::InvalidParameter(format!(
                "degenerate corpus shape {self:?}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let by_group: Vec<Vec<usize>> = (0..self.groups)
            .map(|g| {
                (0..self.items)
                    .filter(|&i| self.item_group(i) == g)
                    .collect()
            })
            .collect();
        let width = (self.users - 1).to_string().len();
        let item_width = (self.items - 1).to_string().len();
        let mut out = Vec::new();
        for u in 0..self.users {
            let group = u % self.groups;
            let count = rng.random_range(1..2 * self.mean_reviews);
            for _ in 0..count {
                let item = if rng.random::<f64>() < self.loyalty {
                    *by_group[group].choose(&mut rng).expect("non-empty group")
                } else {
                    rng.random_range(0..self.items)
                };
                let liked = self.item_group(item) == group;
                let sentiment = if liked {
                    Sentiment::Positive
                } else {
                    Sentiment::Negative
                };
                let mut r = ReviewRecord::new(
                    &format!("{u:0width$}"),
                    &format!("{item:0item_width$}"),
                    sentiment,
                );
                r.item_name = Some(format!("Item {item}"));
                for c in Category::ALL {
                    let vote = if rng.random::<f64>() < self.noise {
                        rng.random_range(4..=6)
                    } else if liked {
                        rng.random_range(7..=10)
                    } else {
                        rng.random_range(1..=3)
                    };
                    r = r.with_vote(c, vote);
                }
                r.comment = format!("review {} of item {item}", out.len());
                out.push(r);
            }
        }
        Ok(out)
    }
}
