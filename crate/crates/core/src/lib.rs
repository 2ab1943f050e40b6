//! Community-based node orderings for adjacency-matrix compression.
//!
//! Load an undirected graph ([`graph`]), detect communities
//! ([`community`]), turn them into a node ordering ([`ordering`]) and score
//! the reordered adjacency matrix with block-encoding costs ([`blockcost`]).

pub mod blockcost;
pub mod community;
pub mod error;
pub mod graph;
pub mod io;
pub mod ordering;

pub use blockcost::{binary_entropy, block_histogram, cost1, cost2, BlockHistogram, CostParams, CostReport};
pub use community::{DetectParams, Detection, Method, Partition};
pub use error::{Error, Result};
pub use graph::{ComponentLabeling, Graph, LoadedGraph};
pub use ordering::{naive_community_ordering, slashburn_ordering, Ordering, SlashBurnParams};
