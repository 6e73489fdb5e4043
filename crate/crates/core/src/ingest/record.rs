use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const USER_PREFIX: &str = "user_";
pub const ITEM_PREFIX: &str = "perfume_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sentiment {
    Positive,
    Negative,
}

impl FromStr for Sentiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" => Ok(Sentiment::Positive),
            "negative" => Ok(Sentiment::Negative),
            other => Err(Error::UnknownValue {
                kind: "sentiment",
                value: other.to_string(),
            }),
        }
    }
}

/// A rated category that can drive sentiment override and edge blending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Scent,
    Longevity,
    Sillage,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Scent, Category::Longevity, Category::Sillage];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Scent => "scent",
            Category::Longevity => "longevity",
            Category::Sillage => "sillage",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "scent" => Ok(Category::Scent),
            "longevity" => Ok(Category::Longevity),
            "sillage" => Ok(Category::Sillage),
            _ => Err(Error::UnknownCategory(s.to_string())),
        }
    }
}

/// Per-category votes on a 1–10 scale. Bottle design is carried but never
/// consulted downstream.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Votes {
    pub scent: Option<u8>,
    pub longevity: Option<u8>,
    pub sillage: Option<u8>,
    pub bottle_design: Option<u8>,
}

impl Votes {
    pub fn get(&self, category: Category) -> Option<u8> {
        match category {
            Category::Scent => self.scent,
            Category::Longevity => self.longevity,
            Category::Sillage => self.sillage,
        }
    }
}

impl Sentiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Positive => "positive",
            Sentiment::Negative => "negative",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One user's comment on one item.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReviewRecord {
    pub user_id: String,
    pub item_id: String,
    pub item_name: Option<String>,
    pub comment: String,
    pub votes: Votes,
    pub sentiment: Sentiment,
    pub is_reply: bool,
}

impl ReviewRecord {
    /// Record with prefixed ids, no votes, and an empty comment.
    pub fn new(user: &str, item: &str, sentiment: Sentiment) -> Self {
        ReviewRecord {
            user_id: prefixed(USER_PREFIX, user),
            item_id: prefixed(ITEM_PREFIX, item),
            item_name: None,
            comment: String::new(),
            votes: Votes::default(),
            sentiment,
            is_reply: false,
        }
    }

    pub fn with_vote(mut self, category: Category, vote: u8) -> Self {
        match category {
            Category::Scent => self.votes.scent = Some(vote),
            Category::Longevity => self.votes.longevity = Some(vote),
            Category::Sillage => self.votes.sillage = Some(vote),
        }
        self
    }

    pub fn with_comment(mut self, comment: &str) -> Self {
        self.comment = comment.to_string();
        self
    }
}

/// Adds `prefix` unless the id already carries it.
pub fn prefixed(prefix: &str, id: &str) -> String {
    let id = id.trim();
    if id.starts_with(prefix) {
        id.to_string()
    } else {
        format!("{prefix}{id}")
    }
}

/// Reads review records from a CSV file. See [`parse_reviews`].
pub fn read_reviews(path: impl AsRef<Path>) -> Result<Vec<ReviewRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_reviews(file, &path.display().to_string())
}

/// Parses the review CSV.
///
/// Required columns: `user_id, perfume_id, comment, vote_scent,
/// vote_longevity, vote_sillage, vote_bottle, sentiment, is_reply`; an
/// optional `perfume_name` column supplies display names. Rows missing a
/// user or item id are skipped. Malformed rows fail with their line number.
pub fn parse_reviews<R: Read>(reader: R, source: &str) -> Result<Vec<ReviewRecord>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let parse_err = |message: String| Error::Parse {
        path: source.to_string(),
        message,
    };
    let headers = csv.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let require =
        |name: &str| column(name).ok_or_else(|| parse_err(format!("missing column {name}")));
    let cols = Columns {
        user: require("user_id")?,
        item: require("perfume_id")?,
        comment: require("comment")?,
        scent: require("vote_scent")?,
        longevity: require("vote_longevity")?,
        sillage: require("vote_sillage")?,
        bottle: require("vote_bottle")?,
        sentiment: require("sentiment")?,
        reply: require("is_reply")?,
        name: column("perfume_name"),
    };

    let mut records = Vec::new();
    let mut skipped = 0usize;
    for row in csv.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::MalformedRow {
                path: source.to_string(),
                line,
                message: e.to_string(),
            }
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let malformed = |message: String| Error::MalformedRow {
            path: source.to_string(),
            line,
            message,
        };
        let field = |i: usize| row.get(i).unwrap_or("").trim();

        let (user, item) = (field(cols.user), field(cols.item));
        if user.is_empty() || item.is_empty() {
            skipped += 1;
            continue;
        }
        let vote = |i: usize, label: &str| -> Result<Option<u8>> {
            let cell = field(i);
            if cell.is_empty() {
                return Ok(None);
            }
            let v: i64 = cell
                .parse()
                .map_err(|_| malformed(format!("{label}: not an integer: {cell:?}")))?;
            if !(1..=10).contains(&v) {
                return Err(malformed(format!("{label}: {}", Error::VoteOutOfRange(v))));
            }
            Ok(Some(v as u8))
        };
        let votes = Votes {
            scent: vote(cols.scent, "vote_scent")?,
            longevity: vote(cols.longevity, "vote_longevity")?,
            sillage: vote(cols.sillage, "vote_sillage")?,
            bottle_design: vote(cols.bottle, "vote_bottle")?,
        };
        let sentiment = field(cols.sentiment)
            .parse::<Sentiment>()
            .map_err(|e| malformed(e.to_string()))?;
        let is_reply = match field(cols.reply).to_ascii_lowercase().as_str() {
            "" | "0" | "false" => false,
            "1" | "true" => true,
            other => {
                return Err(malformed(format!(
                    "is_reply: expected 0 or 1, got {other:?}"
                )))
            }
        };
        let item_name = cols
            .name
            .map(field)
            .filter(|s| !s.is_empty())
            .map(str::to_string);

        records.push(ReviewRecord {
            user_id: prefixed(USER_PREFIX, user),
            item_id: prefixed(ITEM_PREFIX, item),
            item_name,
            comment: row.get(cols.comment).unwrap_or("").to_string(),
            votes,
            sentiment,
            is_reply,
        });
    }
    if skipped > 0 {
        log::info!("{source}: skipped {skipped} rows without user or item id");
    }
    Ok(records)
}

const REVIEW_HEADER: [&str; 10] = [
    "user_id",
    "perfume_id",
    "perfume_name",
    "comment",
    "vote_scent",
    "vote_longevity",
    "vote_sillage",
    "vote_bottle",
    "sentiment",
    "is_reply",
];

/// Writes records in the layout [`parse_reviews`] reads. Absent votes and
/// names become empty cells.
pub fn write_reviews_to<W: Write>(w: W, records: &[ReviewRecord]) -> csv::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(REVIEW_HEADER)?;
    let cell = |v: Option<u8>| v.map_or_else(String::new, |v| v.to_string());
    for r in records {
        csv.write_record([
            r.user_id.as_str(),
            r.item_id.as_str(),
            r.item_name.as_deref().unwrap_or(""),
            r.comment.as_str(),
            &cell(r.votes.scent),
            &cell(r.votes.longevity),
            &cell(r.votes.sillage),
            &cell(r.votes.bottle_design),
            r.sentiment.as_str(),
            if r.is_reply { "1" } else { "0" },
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_reviews(records: &[ReviewRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_reviews_to(std::io::BufWriter::new(file), records).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.display().to_string(),
            message: format!("{other:?}"),
        },
    })
}

struct Columns {
    user: usize,
    item: usize,
    comment: usize,
    scent: usize,
    longevity: usize,
    sillage: usize,
    bottle: usize,
    sentiment: usize,
    reply: usize,
    name: Option<usize>,
}

/// Drops repeated `(user, item, comment)` rows, keeping the first.
pub fn deduplicate(records: Vec<ReviewRecord>) -> Vec<ReviewRecord> {
    let mut seen = HashSet::new();
    records
        .into_iter()
        .filter(|r| seen.insert((r.user_id.clone(), r.item_id.clone(), r.comment.clone())))
        .collect()
}

/// Removes every record of items with at most `min_comments_exclusive`
/// comments. Counts include both sentiments.
pub fn filter_low_engagement(
    records: Vec<ReviewRecord>,
    min_comments_exclusive: usize,
) -> Vec<ReviewRecord> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for r in &records {
        *counts.entry(r.item_id.as_str()).or_default() += 1;
    }
    let keep: HashSet<String> = counts
        .into_iter()
        .filter(|&(_, c)| c > min_comments_exclusive)
        .map(|(id, _)| id.to_string())
        .collect();
    records
        .into_iter()
        .filter(|r| keep.contains(&r.item_id))
        .collect()
}
