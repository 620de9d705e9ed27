//! Page graphs: visibility edges, edge weights, node features and island
//! pruning.

pub mod features;
pub mod graph;
pub mod islands;
pub mod visibility;
pub mod weights;

pub use features::{
    featurize, featurize_document, featurize_with_layout, text_stats, FeatureLayout, FeatureSet, BASE_DIM,
};
pub use graph::{GraphCache, PageGraph};
pub use islands::{island_mask, prune_islands, DEFAULT_ISLAND_HOPS};
pub use visibility::{build_visibility_edges, visibility_edges_for_boxes, Axis};
pub use weights::{edge_gap, weight_edges, weights_from_gaps};
