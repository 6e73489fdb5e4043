use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::ingest::{apply_vote_override, Category, ReviewRecord, Sentiment};

/// Which reviews become user–item incidences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncidenceRule {
    /// Every comment, whatever its sentiment.
    AllComments,
    /// Comments whose sentiment, after the category vote override, is positive.
    PositiveFor(Category),
}

/// Binary user × item incidence matrix.
///
/// Users and items are kept in sorted order; only nodes with at least one
/// incidence are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    users: Vec<String>,
    items: Vec<String>,
    item_names: Vec<Option<String>>,
    incidence: BTreeSet<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn build(records: &[ReviewRecord], rule: IncidenceRule) -> Result<Self> {
        let mut pairs: BTreeSet<(&str, &str)> = BTreeSet::new();
        let mut names: BTreeMap<&str, &str> = BTreeMap::new();
        for r in records {
            let keep = match rule {
                IncidenceRule::AllComments => true,
                IncidenceRule::PositiveFor(category) => {
                    apply_vote_override(r.sentiment, r.votes.get(category))? == Sentiment::Positive
                }
            };
            if let Some(name) = &r.item_name {
                names.entry(&r.item_id).or_insert(name);
            }
            if keep {
                pairs.insert((&r.user_id, &r.item_id));
            }
        }
        Ok(Self::from_pairs_with_names(pairs, &names))
    }

    /// Builds from `(user, item)` pairs; duplicates collapse.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self::from_pairs_with_names(pairs, &BTreeMap::new())
    }

    fn from_pairs_with_names<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
        names: &BTreeMap<&str, &str>,
    ) -> Self {
        let pairs: BTreeSet<(&str, &str)> = pairs.into_iter().collect();
        let users: Vec<String> = pairs
            .iter()
            .map(|&(u, _)| u)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_string)
            .collect();
        let items: Vec<String> = pairs
            .iter()
            .map(|&(_, i)| i)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_string)
            .collect();
        let position =
            |list: &[String], id: &str| list.binary_search_by(|x| x.as_str().cmp(id)).unwrap();
        let incidence = pairs
            .iter()
            .map(|&(u, i)| (position(&users, u), position(&items, i)))
            .collect();
        let item_names = items
            .iter()
            .map(|i| names.get(i.as_str()).map(|s| s.to_string()))
            .collect();
        BipartiteGraph {
            users,
            items,
            item_names,
            incidence,
        }
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn item_name(&self, item: usize) -> Option<&str> {
        self.item_names[item].as_deref()
    }

    /// `(user, item)` positions, sorted.
    pub fn incidence(&self) -> &BTreeSet<(usize, usize)> {
        &self.incidence
    }

    pub fn incidence_count(&self) -> usize {
        self.incidence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.incidence.is_empty()
    }

    /// Items incident to each user, by user position.
    pub fn items_by_user(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.users.len()];
        for &(u, i) in &self.incidence {
            out[u].push(i);
        }
        out
    }

    /// Number of users incident to each item.
    pub fn item_degrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.items.len()];
        for &(_, i) in &self.incidence {
            out[i] += 1;
        }
        out
    }
}

/// Positive-only bipartite graph for one category.
pub fn build_bipartite(records: &[ReviewRecord], category: Category) -> Result<BipartiteGraph> {
    BipartiteGraph::build(records, IncidenceRule::PositiveFor(category))
}
