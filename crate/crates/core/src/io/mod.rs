//! Serialized outputs: GraphML networks, community listings, run summaries
//! and DOT drawings. Every writer emits nodes and edges in a fixed order so
//! identical inputs give byte-identical files.

mod communities;
mod dot;
mod graphml;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub use communities::{
    read_communities_csv, read_summary_csv, write_communities_csv, write_summary_csv, SummaryRow,
};
pub use dot::{write_dot, write_dot_to, PALETTE};
pub use graphml::{
    parse_graphml, read_graphml, to_graphml_string, write_graphml, write_graphml_to,
    write_network_graphml, GraphmlDocument,
};

use crate::error::{Error, Result};

/// Opens `path` for writing, runs `body`, and flushes.
fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
