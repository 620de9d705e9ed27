use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::RwLock;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::affinity::{affinity_propagation, AffinityConfig};
use super::distance::{levenshtein, levenshtein_matrix};
use super::patterns::{extract_patterns, CellTable, PatternMode};
use super::repr::{rank_representations, word2repr, RankedRepr, Representation};
use super::skipgram::{SkipGramConfig, SkipGramTrainer, TrainingWindow};
use crate::binfmt;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"TGRE";
pub const EMBEDDINGS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VocabConfig {
    /// Number of most frequent representations clustered into prototypes.
    pub top_l: usize,
    pub mode: PatternMode,
    pub affinity: AffinityConfig,
    pub skipgram: SkipGramConfig,
}

impl Default for VocabConfig {
    fn default() -> Self {
        VocabConfig {
            top_l: 2000,
            mode: PatternMode::Rhombus,
            affinity: AffinityConfig::default(),
            skipgram: SkipGramConfig::default(),
        }
    }
}

/// Diagnostics from [`ReprVocabulary::fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub fewer_than_l: bool,
    pub affinity_converged: bool,
    pub affinity_iterations: usize,
    pub windows: usize,
    pub loss_curve: Vec<f64>,
}

/// Prototype representations and their trained embeddings.
#[derive(Debug)]
pub struct ReprVocabulary {
    prototypes: Vec<Representation>,
    prototype_chars: Vec<Vec<char>>,
    embeddings: Array2<f64>,
    frequency_rank: Vec<RankedRepr>,
    top_l: usize,
    mode: PatternMode,
    seed: u64,
    cache: RwLock<HashMap<Representation, usize>>,
}

impl Clone for ReprVocabulary {
    fn clone(&self) -> Self {
        ReprVocabulary {
            prototypes: self.prototypes.clone(),
            prototype_chars: self.prototype_chars.clone(),
            embeddings: self.embeddings.clone(),
            frequency_rank: self.frequency_rank.clone(),
            top_l: self.top_l,
            mode: self.mode,
            seed: self.seed,
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl PartialEq for ReprVocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.prototypes == other.prototypes
            && self.embeddings == other.embeddings
            && self.frequency_rank == other.frequency_rank
            && self.top_l == other.top_l
            && self.mode == other.mode
            && self.seed == other.seed
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    prototypes: usize,
    dim: usize,
    top_l: usize,
    mode: PatternMode,
    seed: u64,
    prototype_strings: Vec<Representation>,
    frequency_rank: Vec<RankedRepr>,
}

impl ReprVocabulary {
    /// Builds a vocabulary from explicit parts. Every prototype must appear in
    /// `frequency_rank` when the rank is non-empty.
    pub fn from_parts(
        prototypes: Vec<Representation>,
        embeddings: Array2<f64>,
        frequency_rank: Vec<RankedRepr>,
        top_l: usize,
        mode: PatternMode,
        seed: u64,
    ) -> Result<Self> {
        if embeddings.nrows() != prototypes.len() {
            return Err(Error::invalid(format!(
                "{} prototypes but {} embedding rows",
                prototypes.len(),
                embeddings.nrows()
            )));
        }
        if embeddings.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("embeddings must be finite"));
        }
        if !frequency_rank.is_empty() {
            if prototypes.len() > frequency_rank.len() {
                return Err(Error::invalid("more prototypes than ranked representations"));
            }
            if let Some(p) = prototypes
                .iter()
                .find(|p| !frequency_rank.iter().any(|r| &r.repr == *p))
            {
                return Err(Error::invalid(format!("prototype `{p}` is not a ranked representation")));
            }
        }
        let prototype_chars = prototypes.iter().map(Representation::chars).collect();
        Ok(ReprVocabulary {
            prototypes,
            prototype_chars,
            embeddings,
            frequency_rank,
            top_l,
            mode,
            seed,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// A vocabulary with no prototypes whose lookups are all-zero vectors of
    /// width `dim` (zero width when `dim == 0`).
    pub fn zeros(dim: usize) -> Self {
        ReprVocabulary::from_parts(
            Vec::new(),
            Array2::zeros((0, dim)),
            Vec::new(),
            0,
            PatternMode::Rhombus,
            0,
        )
        .expect("empty vocabulary is valid")
    }

    /// Runs the whole induction pipeline: rank cell representations, cluster
    /// the top `l` by edit distance into prototypes, map every cell to its
    /// nearest prototype, and train skip-gram embeddings over pattern windows.
    pub fn fit(tables: &[CellTable], config: &VocabConfig) -> Result<(Self, FitReport)> {
        if tables.is_empty() {
            return Err(Error::invalid("no tables to train on"));
        }
        let cells = tables
            .iter()
            .flat_map(|t| t.rows().iter().flatten())
            .map(String::as_str);
        let rank = rank_representations(cells, config.top_l)?;
        let reprs: Vec<&str> = rank.entries.iter().map(|e| e.repr.as_str()).collect();
        let dist = levenshtein_matrix(&reprs);
        let clusters = affinity_propagation(&dist, &config.affinity);
        let prototypes: Vec<Representation> = clusters
            .exemplars
            .iter()
            .map(|&i| rank.entries[i].repr.clone())
            .collect();

        let mut vocab = ReprVocabulary::from_parts(
            prototypes,
            Array2::zeros((clusters.exemplars.len(), config.skipgram.dim)),
            rank.entries,
            config.top_l,
            config.mode,
            config.skipgram.seed,
        )?;

        let windows = vocab.training_windows(tables, config.mode)?;
        let trainer = SkipGramTrainer::new(vocab.len(), &windows, config.skipgram)?;
        let model = trainer.train(&windows);
        vocab.embeddings = model.input;
        let report = FitReport {
            fewer_than_l: rank.fewer_than_l,
            affinity_converged: clusters.converged,
            affinity_iterations: clusters.iterations,
            windows: windows.len(),
            loss_curve: model.loss_curve,
        };
        Ok((vocab, report))
    }

    /// Maps each pattern window to prototype ids. Empty cells count as
    /// missing positions; windows with an empty target are skipped.
    pub fn training_windows(
        &self,
        tables: &[CellTable],
        mode: PatternMode,
    ) -> Result<Vec<TrainingWindow>> {
        let mut out = Vec::new();
        for table in tables {
            let ids: Vec<Vec<Option<usize>>> = table
                .rows()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| self.prototype_for_text(cell))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            for w in extract_patterns(table, mode) {
                let (ti, tj) = w.target();
                let Some(target) = ids[ti][tj] else { continue };
                let contexts = w.contexts().filter_map(|(i, j)| ids[i][j]).collect();
                out.push(TrainingWindow { target, contexts });
            }
        }
        Ok(out)
    }

    fn prototype_for_text(&self, text: &str) -> Result<Option<usize>> {
        if text.is_empty() || self.prototypes.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.nearest_prototype(&word2repr(text)?)))
    }

    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }

    /// Embedding width.
    pub fn dim(&self) -> usize {
        self.embeddings.ncols()
    }

    pub fn prototypes(&self) -> &[Representation] {
        &self.prototypes
    }

    pub fn embeddings(&self) -> &Array2<f64> {
        &self.embeddings
    }

    pub fn frequency_rank(&self) -> &[RankedRepr] {
        &self.frequency_rank
    }

    pub fn mode(&self) -> PatternMode {
        self.mode
    }

    /// Index of the prototype closest to `repr` in edit distance; ties go to
    /// the lowest index. Panics on an empty vocabulary.
    pub fn nearest_prototype(&self, repr: &Representation) -> usize {
        if let Some(&i) = self.cache.read().unwrap().get(repr) {
            return i;
        }
        let chars = repr.chars();
        let mut best = 0;
        let mut best_d = usize::MAX;
        for (i, p) in self.prototype_chars.iter().enumerate() {
            let d = levenshtein(&chars, p);
            if d < best_d {
                best = i;
                best_d = d;
                if d == 0 {
                    break;
                }
            }
        }
        self.cache.write().unwrap().insert(repr.clone(), best);
        best
    }

    /// Embedding of the token's representation (nearest prototype row).
    /// Empty text or an empty vocabulary yields a zero vector.
    pub fn lookup(&self, token_text: &str) -> Vec<f64> {
        if token_text.is_empty() || self.prototypes.is_empty() {
            return vec![0.0; self.dim()];
        }
        let repr = word2repr(token_text).expect("text is non-empty");
        self.embeddings.row(self.nearest_prototype(&repr)).to_vec()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = Header {
            prototypes: self.len(),
            dim: self.dim(),
            top_l: self.top_l,
            mode: self.mode,
            seed: self.seed,
            prototype_strings: self.prototypes.clone(),
            frequency_rank: self.frequency_rank.clone(),
        };
        let mut w = binfmt::Writer::new(MAGIC, EMBEDDINGS_FORMAT_VERSION, &header);
        w.f32s(self.embeddings.iter().map(|&v| v as f32));
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (h, mut r): (Header, _) =
            binfmt::Reader::open(bytes, MAGIC, EMBEDDINGS_FORMAT_VERSION, "embeddings")?;
        if h.prototype_strings.len() != h.prototypes {
            return Err(Error::Corrupt {
                what: "embeddings",
                reason: "prototype count disagrees with header".into(),
            });
        }
        let data = r.f32s(h.prototypes * h.dim)?;
        r.finish()?;
        let emb = Array2::from_shape_vec((h.prototypes, h.dim), data.into_iter().map(f64::from).collect())
            .expect("length checked");
        ReprVocabulary::from_parts(h.prototype_strings, emb, h.frequency_rank, h.top_l, h.mode, h.seed)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(fs::write(path, self.to_bytes())?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

/// Table corpus file: a list of rectangular string grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCorpus {
    pub tables: Vec<CellTable>,
}

impl TableCorpus {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table corpus serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
