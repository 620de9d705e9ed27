//! Token-level table extraction and document layout analysis.
//!
//! Pages are dumps of word-level PDF tokens. Each page becomes a visibility
//! graph whose nodes carry geometric, textual and representation-embedding
//! features; a weighted GraphSAGE-style network classifies every node into
//! one of nine layout classes (text, title, table cell, table header, ...).
//!
//! Pipeline, by module:
//!
//! * [`doc_model`]: tokens, pages, labels, region annotations and the
//!   tokens/annotation file formats.
//! * [`dataset`]: token labeling from region annotations, caption
//!   heuristic, corpus splits and a synthetic page generator.
//! * [`repr_embed`]: string representations, prototype induction by
//!   affinity propagation over edit distances, skip-gram training over
//!   table-cell visiting patterns, and lookup.
//! * [`graph_builder`]: visibility edges, edge weights, node features and
//!   island pruning.
//! * [`gnn`]: network sizing, forward pass, training and inference.
//! * [`post_eval`]: block grouping, metrics and SVG overlays.

pub mod dataset;
pub mod doc_model;
pub mod error;
pub mod gnn;
pub mod graph_builder;
pub mod post_eval;
pub mod repr_embed;

mod binfmt;

pub use error::{Error, Result};
