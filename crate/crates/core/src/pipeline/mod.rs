//! The experiment grid: one network per (variant, category), every selected
//! algorithm on every network, and all outputs written to one directory.

mod config;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use config::{PipelineConfig, Variant};

use crate::community::{detect, CommunityReport};
use crate::error::{Error, Result};
use crate::graph::{modularity, Partition};
use crate::ingest::{
    deduplicate, filter_low_engagement, normalize_comments, read_reviews, BipartiteGraph, Category,
    EmojiDictionary, IdentityNormalizer, IncidenceRule, ReviewRecord,
};
use crate::io::{
    read_communities_csv, read_graphml, write_communities_csv, write_dot, write_graphml,
    write_network_graphml, write_summary_csv, SummaryRow,
};
use crate::projection::{project_bipartite, CoPreferenceGraph, ItemRatings};

/// Category label used in file names and summaries for the primary network.
pub const ALL_CATEGORIES: &str = "all";

/// One constructed co-preference network.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub variant: Variant,
    /// `None` for the primary network.
    pub category: Option<Category>,
    pub graph: CoPreferenceGraph,
}

impl Network {
    pub fn category_label(&self) -> &'static str {
        self.category.map_or(ALL_CATEGORIES, Category::as_str)
    }

    /// File stem shared by every output derived from this network.
    pub fn stem(&self) -> String {
        format!("{}_{}", self.variant, self.category_label())
    }
}

/// Result of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub variant: Variant,
    pub category: Option<Category>,
    pub report: CommunityReport,
    /// Q under the configured modularity mode.
    pub modularity: f64,
    pub duration: Duration,
}

impl CellReport {
    pub fn category_label(&self) -> &'static str {
        self.category.map_or(ALL_CATEGORIES, Category::as_str)
    }

    pub fn stem(&self) -> String {
        format!(
            "{}_{}_{}",
            self.variant,
            self.category_label(),
            self.report.algorithm
        )
    }

    pub fn summary_row(&self) -> SummaryRow {
        SummaryRow {
            algorithm: self.report.algorithm.to_string(),
            variant: self.variant.to_string(),
            category: self.category_label().to_string(),
            modularity: self.modularity,
            communities: self.report.community_count,
        }
    }
}

/// Reads the reviews and applies deduplication, text normalization, emoji
/// replacement and the engagement filter.
pub fn load_records(config: &PipelineConfig) -> Result<Vec<ReviewRecord>> {
    let mut records = read_reviews(&config.input)?;
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    if config.deduplicate {
        let before = records.len();
        records = deduplicate(records);
        log::info!("deduplication removed {} rows", before - records.len());
    }
    let emoji = config
        .emoji
        .as_ref()
        .map(EmojiDictionary::read_tsv)
        .transpose()?;
    normalize_comments(&mut records, &IdentityNormalizer, emoji.as_ref());
    let records = filter_low_engagement(records, config.min_comments);
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    log::info!("{} records after filtering", records.len());
    Ok(records)
}

pub fn load_ratings(config: &PipelineConfig, records: &[ReviewRecord]) -> Result<ItemRatings> {
    match &config.ratings {
        Some(path) => ItemRatings::read_csv(path),
        None => {
            log::info!("no ratings file; averaging review votes per item");
            Ok(ItemRatings::from_reviews(records))
        }
    }
}

/// Builds one network: bipartite graph, projection, optional blend, edge
/// filter, isolated-item pruning and (unless disabled for the primary
/// network) degree normalization.
pub fn build_network(
    config: &PipelineConfig,
    records: &[ReviewRecord],
    ratings: &ItemRatings,
    variant: Variant,
    category: Option<Category>,
) -> Result<Network> {
    let rule = match (variant, category) {
        (Variant::Primary, _) => IncidenceRule::AllComments,
        (_, Some(c)) => IncidenceRule::PositiveFor(c),
        (_, None) => {
            return Err(Error::InvalidParameter(format!(
                "variant {variant} needs a category"
            )));
        }
    };
    let bipartite = BipartiteGraph::build(records, rule)?;
    let mut graph = project_bipartite(&bipartite);
    if variant == Variant::Blend {
        let c = category.expect("checked above");
        graph = graph.blend_weights(ratings, c, config.blend)?;
    }
    graph = graph
        .filter_edges(config.min_edge_weight, config.filter_mode)
        .prune_isolated();
    if variant != Variant::Primary || config.normalize_primary {
        graph = graph.normalize_weights();
    }
    let network = Network {
        variant,
        category: if variant == Variant::Primary {
            None
        } else {
            category
        },
        graph,
    };
    log::info!(
        "network {}: {} items, {} edges",
        network.stem(),
        network.graph.item_count(),
        network.graph.edge_count()
    );
    Ok(network)
}

/// Every network the configuration selects, primary first, then by
/// variant and category.
pub fn build_networks(
    config: &PipelineConfig,
    records: &[ReviewRecord],
    ratings: &ItemRatings,
) -> Result<Vec<Network>> {
    let mut specs = Vec::new();
    for &v in &config.variants {
        if v.uses_category() {
            specs.extend(config.categories.iter().map(|&c| (v, Some(c))));
        } else {
            specs.push((v, None));
        }
    }
    specs
        .into_par_iter()
        .map(|(v, c)| build_network(config, records, ratings, v, c))
        .collect()
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
}

fn run_cell(
    config: &PipelineConfig,
    network: &Network,
    algorithm: crate::community::Algorithm,
) -> Result<CellReport> {
    let started = Instant::now();
    let mut params = config.params.clone();
    params.algorithm = algorithm;
    params.seed = config.seed;
    let graph = network.graph.to_weighted_graph();
    let cell = || format!("{} on {}", algorithm, network.stem());
    let wrap = |e: Error| Error::Cell {
        cell: cell(),
        source: Box::new(e),
    };
    let report = detect(&graph, &params).map_err(wrap)?;
    let q = config
        .modularity_mode
        .score(&graph, &report.partition)
        .map_err(wrap)?;
    Ok(CellReport {
        variant: network.variant,
        category: network.category,
        report,
        modularity: q,
        duration: started.elapsed(),
    })
}

fn write_cell(dir: &Path, network: &Network, cell: &CellReport) -> Result<()> {
    let [graphml, csv, dot, summary] = cell_outputs(dir, cell);
    let partition = &cell.report.partition;
    write_graphml(&network.graph, partition, graphml)?;
    write_communities_csv(&network.graph, partition, csv)?;
    write_dot(&network.graph, partition, dot)?;
    write_summary_csv(&[cell.summary_row()], summary)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Runs the whole grid and returns the reports sorted by (algorithm,
/// variant, category). With an output directory, each cell writes its
/// GraphML, communities CSV, DOT drawing and one-row summary, and the grid
/// writes `summary.csv`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<Vec<CellReport>> {
    config.validate()?;
    let records = load_records(config)?;
    let ratings = load_ratings(config, &records)?;
    let pool = thread_pool(config.workers)?;
    let (networks, mut reports) = pool.install(|| -> Result<_> {
        let networks = build_networks(config, &records, &ratings)?;
        let cells: Vec<(usize, crate::community::Algorithm)> = (0..networks.len())
            .flat_map(|n| config.algorithms.iter().map(move |&a| (n, a)))
            .collect();
        let reports = cells
            .par_iter()
            .map(|&(n, a)| run_cell(config, &networks[n], a).map(|r| (n, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok((networks, reports))
    })?;
    reports.sort_by(|(_, x), (_, y)| {
        (x.report.algorithm, x.variant, x.category).cmp(&(
            y.report.algorithm,
            y.variant,
            y.category,
        ))
    });

    if let Some(dir) = &config.out_dir {
        ensure_dir(dir)?;
        pool.install(|| {
            reports
                .par_iter()
                .try_for_each(|(n, cell)| write_cell(dir, &networks[*n], cell))
        })?;
        let rows: Vec<SummaryRow> = reports.iter().map(|(_, c)| c.summary_row()).collect();
        write_summary_csv(&rows, dir.join("summary.csv"))?;
    }
    for (_, c) in &reports {
        log::info!(
            "{}: Q = {:.4}, {} communities, {:.2?}",
            c.stem(),
            c.modularity,
            c.report.community_count,
            c.duration
        );
    }
    Ok(reports.into_iter().map(|(_, c)| c).collect())
}

/// Builds the networks only and, with an output directory, writes each as
/// `<variant>_<category>.graphml`.
pub fn project_networks(config: &PipelineConfig) -> Result<Vec<Network>> {
    config.validate()?;
    let records = load_records(config)?;
    let ratings = load_ratings(config, &records)?;
    let networks =
        thread_pool(config.workers)?.install(|| build_networks(config, &records, &ratings))?;
    if let Some(dir) = &config.out_dir {
        ensure_dir(dir)?;
        for n in &networks {
            write_network_graphml(&n.graph, dir.join(format!("{}.graphml", n.stem())))?;
        }
    }
    Ok(networks)
}

/// Weighted modularity of a serialized network under a serialized
/// community listing. Items missing from the listing are an error.
pub fn rescore(graphml: impl AsRef<Path>, communities: impl AsRef<Path>) -> Result<f64> {
    let doc = read_graphml(graphml)?;
    let assignment = read_communities_csv(communities)?;
    let graph = doc.graph.to_weighted_graph();
    let partition = Partition::from_assignment(&graph, &assignment)?;
    modularity(&graph, &partition)
}

/// Output file paths of one cell, in the order they are written.
pub fn cell_outputs(dir: &Path, cell: &CellReport) -> [PathBuf; 4] {
    let stem = cell.stem();
    [
        dir.join(format!("{stem}.graphml")),
        dir.join(format!("{stem}.csv")),
        dir.join(format!("{stem}.dot")),
        dir.join(format!("{stem}_summary.csv")),
    ]
}
