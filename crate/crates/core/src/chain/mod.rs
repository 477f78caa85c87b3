//! Bipartite pipeline for the distance to chain graphs.

mod kernel;
pub mod order;
pub mod rules;

pub use kernel::{chain_certificate, kernelize_chain, size_bound, ChainReport, BOUNDARY_SLACK};
pub use order::{
    approx_chain_deletion, chain_matching_parallel, chain_order, parallel_pairs, Bipartition,
    ChainOrdering,
};
pub use rules::{BufferContext, GapCut, Verdict};
