//! Item co-preference networks built from sentiment-labeled reviews, and
//! community detection over them.
//!
//! The pipeline turns user–item review records into a positive-only
//! bipartite graph, projects it onto the items, blends co-occurrence counts
//! with category ratings, filters and normalizes the weights, and then
//! partitions the items with one of five algorithms. Every partition is
//! scored by weighted modularity.
//!
//! ```
//! use copref::graph::{modularity, Partition, WeightedGraph};
//!
//! let g = WeightedGraph::from_edges(&[
//!     ("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0),
//!     ("d", "e", 1.0), ("e", "f", 1.0), ("d", "f", 1.0),
//! ]).unwrap();
//! let q = modularity(&g, &Partition::new(vec![0, 0, 0, 1, 1, 1])).unwrap();
//! assert!((q - 0.5).abs() < 1e-12);
//! ```

pub mod community;
pub mod error;
pub mod generate;
pub mod graph;
pub mod ingest;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod projection;

pub use error::{Error, Result};
