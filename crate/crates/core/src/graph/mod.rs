//! Weighted undirected graphs, partitions, and modularity.

mod modularity;
mod partition;
mod weighted;

pub use modularity::{modularity, modularity_with_resolution, ModularityMode};
pub use partition::{canonicalize_partition, normalized_mutual_information, Partition};
pub use weighted::{Edge, GraphBuilder, WeightedGraph};
