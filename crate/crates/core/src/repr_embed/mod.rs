//! Representation embeddings for token strings.
//!
//! A token's text is reduced to a shape string (`"12.5"` → `"x.x"`). The most
//! frequent shapes found in table cells are clustered by edit distance with
//! affinity propagation; the exemplars become prototypes. Every cell is then
//! mapped to its nearest prototype and a skip-gram model is trained over
//! windows of neighbouring cells. Tokens are embedded with the vector of their
//! nearest prototype.

pub mod affinity;
pub mod distance;
pub mod patterns;
pub mod repr;
pub mod skipgram;
pub mod vocab;

pub use affinity::{affinity_propagation, AffinityConfig, AffinityResult};
pub use distance::{levenshtein, levenshtein_matrix, levenshtein_str, DistanceMatrix};
pub use patterns::{extract_patterns, CellIndex, CellTable, PatternMode, PatternWindow};
pub use repr::{rank_representations, word2repr, FrequencyRank, RankedRepr, Representation};
pub use skipgram::{sgns_loss, SkipGramConfig, SkipGramModel, SkipGramTrainer, TrainingWindow};
pub use vocab::{FitReport, ReprVocabulary, TableCorpus, VocabConfig};
