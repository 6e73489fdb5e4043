use std::collections::{BTreeMap, HashMap};
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{prefixed, Category, ReviewRecord, ITEM_PREFIX};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CategoryRating {
    /// Mean vote on the 0–10 scale.
    pub average: f64,
    pub votes: u64,
}

/// Per-item, per-category average ratings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ItemRatings {
    ratings: HashMap<(String, Category), CategoryRating>,
}

impl ItemRatings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        item: &str,
        category: Category,
        average: f64,
        votes: u64,
    ) -> Result<()> {
        if !(0.0..=10.0).contains(&average) {
            return Err(Error::RatingOutOfRange {
                item: item.to_string(),
                value: average,
            });
        }
        self.ratings.insert(
            (prefixed(ITEM_PREFIX, item), category),
            CategoryRating { average, votes },
        );
        Ok(())
    }

    pub fn get(&self, item: &str, category: Category) -> Option<CategoryRating> {
        self.ratings.get(&(item.to_string(), category)).copied()
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    /// Unweighted mean of the item averages for `category`.
    pub fn category_mean(&self, category: Category) -> Option<f64> {
        let mut items: Vec<(&str, f64)> = self
            .ratings
            .iter()
            .filter(|((_, c), _)| *c == category)
            .map(|((item, _), r)| (item.as_str(), r.average))
            .collect();
        if items.is_empty() {
            return None;
        }
        // Fixed summation order so the mean is reproducible bit for bit.
        items.sort_by(|a, b| a.0.cmp(b.0));
        Some(items.iter().map(|&(_, r)| r).sum::<f64>() / items.len() as f64)
    }

    /// Averages of the per-review votes, for when no ratings table exists.
    pub fn from_reviews(records: &[ReviewRecord]) -> Self {
        let mut sums: BTreeMap<(&str, Category), (u64, u64)> = BTreeMap::new();
        for r in records {
            for c in Category::ALL {
                if let Some(v) = r.votes.get(c) {
                    let e = sums.entry((&r.item_id, c)).or_default();
                    e.0 += u64::from(v);
                    e.1 += 1;
                }
            }
        }
        let ratings = sums
            .into_iter()
            .map(|((item, c), (sum, n))| {
                let rating = CategoryRating {
                    average: sum as f64 / n as f64,
                    votes: n,
                };
                ((item.to_string(), c), rating)
            })
            .collect();
        ItemRatings { ratings }
    }

    /// Reads `perfume_id,category,avg_rating,vote_count`. Rows for categories
    /// other than scent, longevity and sillage (e.g. bottle design) are skipped.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(file, &path.display().to_string())
    }

    pub fn parse_csv<R: Read>(reader: R, source: &str) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let headers = csv
            .headers()
            .map_err(|e| Error::Parse {
                path: source.to_string(),
                message: e.to_string(),
            })?
            .clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::Parse {
                    path: source.to_string(),
                    message: format!("missing column {name}"),
                })
        };
        let (item_col, cat_col, avg_col, count_col) = (
            col("perfume_id")?,
            col("category")?,
            col("avg_rating")?,
            col("vote_count")?,
        );

        let mut out = ItemRatings::new();
        for row in csv.records() {
            let row = row.map_err(|e| Error::MalformedRow {
                path: source.to_string(),
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = row.position().map_or(0, |p| p.line());
            let malformed = |message: String| Error::MalformedRow {
                path: source.to_string(),
                line,
                message,
            };
            let field = |i: usize| row.get(i).unwrap_or("").trim();
            let cat = field(cat_col).to_ascii_lowercase();
            if matches!(cat.as_str(), "bottle" | "bottle_design" | "bottledesign") {
                continue;
            }
            let category: Category = cat.parse().map_err(|e: Error| malformed(e.to_string()))?;
            let average: f64 = field(avg_col).parse().map_err(|_| {
                malformed(format!("avg_rating: not a number: {:?}", field(avg_col)))
            })?;
            let votes: u64 = field(count_col).parse().map_err(|_| {
                malformed(format!(
                    "vote_count: not an integer: {:?}",
                    field(count_col)
                ))
            })?;
            let item = field(item_col);
            if item.is_empty() {
                return Err(malformed("empty perfume_id".to_string()));
            }
            out.insert(item, category, average, votes)
                .map_err(|e| malformed(e.to_string()))?;
        }
        Ok(out)
    }
}
