use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::community::{Algorithm, AlgorithmParams, LaplacianKind};
use crate::error::{Error, Result};
use crate::graph::ModularityMode;
use crate::ingest::Category;
use crate::projection::{BlendCoefficients, EdgeFilterMode};

/// How a network's edges are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Every comment regardless of sentiment; weights are raw co-occurrence
    /// counts. Ignores the category.
    Primary,
    /// Positive comments after the category vote override.
    Sentiment,
    /// As `Sentiment`, with counts blended with category ratings.
    Blend,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Primary, Variant::Sentiment, Variant::Blend];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Primary => "primary",
            Variant::Sentiment => "sentiment",
            Variant::Blend => "blend",
        }
    }

    pub fn uses_category(self) -> bool {
        self != Variant::Primary
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "primary" => Ok(Variant::Primary),
            "sentiment" => Ok(Variant::Sentiment),
            "blend" | "sentiment+blend" => Ok(Variant::Blend),
            _ => Err(Error::UnknownValue {
                kind: "variant",
                value: s.to_string(),
            }),
        }
    }
}

/// Everything a grid run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub emoji: Option<PathBuf>,
    /// Per-item category ratings; without one, ratings are averaged from the
    /// review votes.
    pub ratings: Option<PathBuf>,
    pub categories: Vec<Category>,
    pub variants: Vec<Variant>,
    pub algorithms: Vec<Algorithm>,
    /// Algorithm settings shared by every cell; `algorithm` is overwritten
    /// per cell.
    pub params: AlgorithmParams,
    /// Items with this many comments or fewer are dropped.
    pub min_comments: usize,
    /// Edges with weight at or below this are dropped.
    pub min_edge_weight: f64,
    pub blend: BlendCoefficients,
    pub filter_mode: EdgeFilterMode,
    pub modularity_mode: ModularityMode,
    /// Apply degree normalization to the primary network as well.
    pub normalize_primary: bool,
    /// Collapse repeated (user, item, comment) rows before anything else.
    pub deduplicate: bool,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    /// Concurrent grid cells; 0 uses every core.
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: PathBuf::new(),
            emoji: None,
            ratings: None,
            categories: Category::ALL.to_vec(),
            variants: Variant::ALL.to_vec(),
            algorithms: Algorithm::ALL.to_vec(),
            params: AlgorithmParams::new(Algorithm::Louvain),
            min_comments: 3,
            min_edge_weight: 3.0,
            blend: BlendCoefficients::default(),
            filter_mode: EdgeFilterMode::Blended,
            modularity_mode: ModularityMode::Weighted,
            normalize_primary: true,
            deduplicate: true,
            seed: 0,
            out_dir: None,
            workers: 0,
        }
    }
}

fn list<T: FromStr<Err = Error> + Copy>(value: &str, all: &[T]) -> Result<Vec<T>> {
    if value.trim().eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    let mut out: Vec<T> = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        out.push(part.parse()?);
    }
    Ok(out)
}

fn dedup_sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v.dedup();
    v
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{key}: cannot parse {value:?}")))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::InvalidParameter(format!(
            "{key}: expected true or false, got {value:?}"
        ))),
    }
}

impl PipelineConfig {
    /// Keys accepted by [`PipelineConfig::set`] and the config file.
    pub const KEYS: [&'static str; 27] = [
        "input",
        "emoji",
        "ratings",
        "categories",
        "variants",
        "algorithms",
        "resolution",
        "gamma",
        "walk_length",
        "spin_states",
        "k",
        "laplacian",
        "start_temperature",
        "cooling",
        "max_sweeps",
        "min_acceptance",
        "min_comments",
        "min_edge_weight",
        "blend_rating",
        "blend_count",
        "filter_mode",
        "modularity_mode",
        "normalize_primary",
        "deduplicate",
        "seed",
        "out",
        "workers",
    ];

    /// Sets one option from its textual form. `category`, `variant`,
    /// `algorithm` are accepted as aliases of the plural keys, and list
    /// values are comma separated or `all`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let v = value.trim();
        let p = &mut self.params;
        match key.as_str() {
            "input" => self.input = PathBuf::from(v),
            "emoji" => self.emoji = (!v.is_empty()).then(|| PathBuf::from(v)),
            "ratings" => self.ratings = (!v.is_empty()).then(|| PathBuf::from(v)),
            "categories" | "category" => self.categories = dedup_sorted(list(v, &Category::ALL)?),
            "variants" | "variant" => self.variants = dedup_sorted(list(v, &Variant::ALL)?),
            "algorithms" | "algorithm" => self.algorithms = dedup_sorted(list(v, &Algorithm::ALL)?),
            "resolution" => p.resolution = number(&key, v)?,
            "gamma" => p.gamma = number(&key, v)?,
            "walk_length" => p.walk_length = number(&key, v)?,
            "spin_states" => p.spin_states = number(&key, v)?,
            "k" => {
                p.k_clusters = if v.is_empty() || v.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(number(&key, v)?)
                }
            }
            "laplacian" => p.laplacian = v.parse::<LaplacianKind>()?,
            "start_temperature" => p.anneal.start_temperature = number(&key, v)?,
            "cooling" => p.anneal.cooling = number(&key, v)?,
            "max_sweeps" => p.anneal.max_sweeps = number(&key, v)?,
            "min_acceptance" => p.anneal.min_acceptance = number(&key, v)?,
            "min_comments" => self.min_comments = number(&key, v)?,
            "min_edge_weight" => self.min_edge_weight = number(&key, v)?,
            "blend_rating" => self.blend.rating = number(&key, v)?,
            "blend_count" => self.blend.count = number(&key, v)?,
            "filter_mode" => self.filter_mode = v.parse()?,
            "modularity_mode" => self.modularity_mode = v.parse()?,
            "normalize_primary" => self.normalize_primary = boolean(&key, v)?,
            "deduplicate" => self.deduplicate = boolean(&key, v)?,
            "seed" => self.seed = number(&key, v)?,
            "out" | "out_dir" => self.out_dir = (!v.is_empty()).then(|| PathBuf::from(v)),
            "workers" => self.workers = number(&key, v)?,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown configuration key {key:?}"
                )))
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines and lines starting with `#`
    /// are ignored; later lines override earlier ones.
    pub fn apply_str(&mut self, text: &str, source: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            // `#` opens a comment at line start or after whitespace
            let line = raw
                .char_indices()
                .find(|&(i, c)| c == '#' && (i == 0 || raw[..i].ends_with(char::is_whitespace)))
                .map_or(raw, |(i, _)| &raw[..i])
                .trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |message: String| Error::MalformedRow {
                path: source.to_string(),
                line: n as u64 + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| malformed("expected key = value".into()))?;
            self.set(key, value).map_err(|e| malformed(e.to_string()))?;
        }
        Ok(())
    }

    pub fn from_str_config(text: &str) -> Result<Self> {
        let mut c = PipelineConfig::default();
        c.apply_str(text, "<config>")?;
        Ok(c)
    }

    /// Reads a config file. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c = PipelineConfig::default();
        c.apply_str(&text, &path.display().to_string())?;
        if let Some(base) = path.parent() {
            let anchor = |p: &mut PathBuf| {
                if p.is_relative() && !p.as_os_str().is_empty() {
                    *p = base.join(&*p);
                }
            };
            anchor(&mut c.input);
            c.emoji.as_mut().map(anchor);
            c.ratings.as_mut().map(anchor);
            c.out_dir.as_mut().map(anchor);
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.input.as_os_str().is_empty() {
            return bad("no input file given".into());
        }
        if self.variants.is_empty() || self.algorithms.is_empty() {
            return bad("select at least one variant and one algorithm".into());
        }
        if self.categories.is_empty() && self.variants.iter().any(|v| v.uses_category()) {
            return bad("select at least one category".into());
        }
        if !(self.min_edge_weight.is_finite() && self.min_edge_weight >= 0.0) {
            return bad(format!(
                "min_edge_weight must be >= 0, got {}",
                self.min_edge_weight
            ));
        }
        let b = self.blend;
        if !(b.rating.is_finite() && b.count.is_finite() && b.rating >= 0.0 && b.count >= 0.0) {
            return bad(format!(
                "blend coefficients must be >= 0, got {} and {}",
                b.rating, b.count
            ));
        }
        self.params.validate()
    }

    /// Number of grid cells the configuration selects.
    pub fn cell_count(&self) -> usize {
        let categorized = self.variants.iter().filter(|v| v.uses_category()).count();
        let primary = usize::from(self.variants.contains(&Variant::Primary));
        self.algorithms.len() * (categorized * self.categories.len() + primary)
    }
}
