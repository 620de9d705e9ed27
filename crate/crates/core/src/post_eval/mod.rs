//! Block grouping, metrics and SVG overlays.

mod blocks;
mod metrics;
mod render;

pub use blocks::{group_blocks, group_components, majority, BlockGrouping, BlockPrediction};
pub use metrics::{compute_metrics, ClassMetrics, MetricsReport};
pub use render::{label_color, render_blocks, render_tokens, TABLE_BLOCK_COLOR};
