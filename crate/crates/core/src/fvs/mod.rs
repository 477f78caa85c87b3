//! Feedback vertex number pipeline.

mod approx;
pub mod forest;
mod kernel;

pub use approx::{approx_fvs, FeedbackVertexSet};
pub use forest::{census, matching_leaves_only, ForestCensus, RootedForest};
pub use kernel::{
    kernelize_fvs, size_bound, FvsOptions, FvsReport, Guard, Milestones, MAX_TABLE_K, SIZE_CONSTANT,
};
