//! The guide's chapters as doc comments, so `cargo test` compiles and runs
//! every code listing in `book/src`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/modularity.md")]
pub mod modularity {}
#[doc = include_str!("../../../book/src/ingest.md")]
pub mod ingest {}
#[doc = include_str!("../../../book/src/projection.md")]
pub mod projection {}
#[doc = include_str!("../../../book/src/algorithms.md")]
pub mod algorithms {}
#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}
