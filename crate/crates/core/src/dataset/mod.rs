//! Ground-truth labeling, corpus splits and the synthetic page generator.

mod corpus;
mod labels;
mod split;
mod synth;

pub use corpus::{LabeledCorpusFile, LabeledCorpusPage};
pub use labels::{
    assign_labels, block_boxes, caption_heuristic, overlap_ratio, LabeledPage,
    DEFAULT_CAPTION_GAP, OVERLAP_THRESHOLD,
};
pub use split::{split_corpus, split_sizes, CorpusSplit, SplitSpec};
pub use synth::{generate_synthetic_pages, SyntheticPage, PAGE_HEIGHT, PAGE_WIDTH};
