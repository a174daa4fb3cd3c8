//! Neighborhood top-N recommendation built on dissimilarity-adjusted set
//! similarities.
//!
//! Profiles are plain sets: the users who engaged an item, or the items in
//! a user's history. Sixteen preset measures share one small algebra (see
//! [`measures`]) that combines a base overlap score with a penalty for what
//! the other profile adds. Neighbor models ([`neighbors`]), score
//! accumulation ([`recommend`]), holdout splitting ([`split`]), ranking
//! metrics ([`metrics`]) and paired significance tests ([`significance`])
//! compose into the sweep driver ([`sweep`]), which is what the command
//! line front end calls.

pub mod dataset;
pub mod error;
pub mod measures;
pub mod metrics;
pub mod neighbors;
pub mod recommend;
pub mod significance;
pub mod split;
pub mod sweep;

pub use dataset::{
    build_dataset, dataset_stats, parse_interactions, Axis, ColumnRole, Dataset, DatasetStats,
    IdMap, InputFormat, InteractionRecord, LineError, ParseOutcome,
};
pub use error::{Error, Result};
pub use measures::{
    base_similarity, clamp_floor, combine, dissimilarity, measure, pair_counts, Adjustment,
    AdjustmentKind, DissimFamily, DissimSpec, Family, MeasureSpec, PairCounts, Preset, Symmetry,
    TableMode,
};
pub use metrics::{diversity_at_n, precision_at_n, PrecisionSummary};
pub use neighbors::{scored_candidates, top_k_neighbors, NeighborModel};
pub use recommend::{
    recommend_all, recommend_top_n, score_item_knn, score_user_knn, RecommendationList,
};
pub use significance::{paired_significance, SignificanceOutcome};
pub use split::{holdout_split, SplitMode, SplitPair};
pub use sweep::{
    lambda_sweep, parse_scheme, render_table, scheme_name, EvalReport, SigSummary, SweepConfig,
    ALPHA,
};
