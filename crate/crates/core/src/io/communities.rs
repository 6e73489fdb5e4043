use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::io::write_file;
use crate::projection::CoPreferenceGraph;

const COMMUNITY_HEADER: [&str; 3] = ["community_id", "perfume_id", "perfume_name"];
const SUMMARY_HEADER: [&str; 5] = [
    "algorithm",
    "variant",
    "category",
    "modularity",
    "communities",
];

/// One line of a run summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub variant: String,
    pub category: String,
    pub modularity: f64,
    pub communities: usize,
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.display().to_string(),
            message: format!("{other:?}"),
        },
    }
}

/// Lists every item with its community, sorted by community and then item
/// id. Labels are canonicalized first. Items without a display name are
/// listed under their id.
pub fn write_communities_csv(
    graph: &CoPreferenceGraph,
    partition: &Partition,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    if partition.len() != graph.item_count() {
        return Err(Error::PartitionMismatch {
            expected: graph.item_count(),
            found: partition.len(),
        });
    }
    let canon = partition.canonical();
    let mut rows: Vec<(usize, &str, &str)> = graph
        .items()
        .iter()
        .enumerate()
        .map(|(i, id)| (canon.label(i), id.as_str(), graph.name(i).unwrap_or(id)))
        .collect();
    rows.sort();
    write_file(path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(COMMUNITY_HEADER)?;
        for (c, id, name) in rows {
            csv.write_record([c.to_string().as_str(), id, name])?;
        }
        csv.flush()
    })
}

/// Reads `perfume_id → community_id` from a communities listing.
pub fn read_communities_csv(path: impl AsRef<Path>) -> Result<HashMap<String, usize>> {
    let path = path.as_ref();
    let mut csv = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = csv.headers().map_err(|e| csv_error(path, e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse {
                path: path.display().to_string(),
                message: format!("missing column {name}"),
            })
    };
    let (c_col, id_col) = (col("community_id")?, col("perfume_id")?);
    let mut out = HashMap::new();
    for row in csv.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::MalformedRow {
            path: path.display().to_string(),
            line,
            message,
        };
        let community = row[c_col]
            .trim()
            .parse()
            .map_err(|_| bad(format!("invalid community id {:?}", &row[c_col])))?;
        let id = row[id_col].trim().to_string();
        if out.insert(id.clone(), community).is_some() {
            return Err(bad(format!("item {id} listed twice")));
        }
    }
    Ok(out)
}

pub fn write_summary_csv(rows: &[SummaryRow], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(SUMMARY_HEADER)?;
        for r in rows {
            csv.write_record([
                r.algorithm.as_str(),
                r.variant.as_str(),
                r.category.as_str(),
                // shortest exact representation
                r.modularity.to_string().as_str(),
                r.communities.to_string().as_str(),
            ])?;
        }
        csv.flush()
    })
}

pub fn read_summary_csv(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let path = path.as_ref();
    let mut csv = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for row in csv.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = || Error::MalformedRow {
            path: path.display().to_string(),
            line,
            message: "expected algorithm,variant,category,modularity,communities".into(),
        };
        if row.len() != SUMMARY_HEADER.len() {
            return Err(bad());
        }
        out.push(SummaryRow {
            algorithm: row[0].to_string(),
            variant: row[1].to_string(),
            category: row[2].to_string(),
            modularity: row[3].parse().map_err(|_| bad())?,
            communities: row[4].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}
