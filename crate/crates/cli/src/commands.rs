use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tabgraph::dataset::{
    assign_labels, caption_heuristic, generate_synthetic_pages, LabeledCorpusFile, LabeledPage,
};
use tabgraph::doc_model::{AnnotationFile, RegionAnnotation, TokenLabel, TokensFile};
use tabgraph::gnn::{self, Checkpoint, GnnConfig, GnnModel, Sizing};
use tabgraph::graph_builder::{
    featurize_document, prune_islands, FeatureLayout, FeatureSet, GraphCache, PageGraph,
};
use tabgraph::post_eval::{compute_metrics, group_blocks, group_components, render_blocks, render_tokens};
use tabgraph::repr_embed::{
    AffinityConfig, PatternMode, ReprVocabulary, SkipGramConfig, TableCorpus, VocabConfig,
};

use crate::output::Run;

fn parse_features(s: &str) -> Result<FeatureSet, String> {
    s.parse().map_err(|e: tabgraph::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<PatternMode, String> {
    s.parse().map_err(|e: tabgraph::Error| e.to_string())
}

fn load_tokens(run: &mut Run, path: &Path) -> Result<TokensFile> {
    let s = run.read_string(path)?;
    TokensFile::from_json(&s).with_context(|| format!("cannot parse {}", path.display()))
}

fn load_labels(run: &mut Run, path: &Path) -> Result<(LabeledCorpusFile, TokensFile)> {
    let s = run.read_string(path)?;
    let labels =
        LabeledCorpusFile::from_json(&s).with_context(|| format!("cannot parse {}", path.display()))?;
    let tokens = load_tokens(run, &labels.tokens_path(path))?;
    if tokens.doc_id != labels.doc_id {
        bail!(
            "labels are for document {:?} but the tokens file holds {:?}",
            labels.doc_id,
            tokens.doc_id
        );
    }
    Ok((labels, tokens))
}

fn load_vocab(run: &mut Run, path: Option<&Path>, set: FeatureSet) -> Result<Option<ReprVocabulary>> {
    match path {
        Some(p) => {
            let bytes = run.read(p)?;
            Ok(Some(
                ReprVocabulary::from_bytes(&bytes).with_context(|| format!("cannot load {}", p.display()))?,
            ))
        }
        None if set.uses_repr() => bail!("feature set {set} needs --vocab"),
        None => Ok(None),
    }
}

/// How a labels file refers to its tokens file: by bare name when both sit
/// in the same directory, by absolute path otherwise.
fn tokens_reference(tokens: &Path, labels_out: &Path) -> Result<String> {
    let abs = fs::canonicalize(tokens).with_context(|| format!("cannot resolve {}", tokens.display()))?;
    let out_dir = match labels_out.parent() {
        Some(d) if !d.as_os_str().is_empty() => fs::canonicalize(d).ok(),
        _ => fs::canonicalize(".").ok(),
    };
    if out_dir.as_deref() == abs.parent() {
        if let Some(name) = abs.file_name() {
            return Ok(name.to_string_lossy().into_owned());
        }
    }
    Ok(abs.display().to_string())
}

fn json_bytes(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

// ---------------------------------------------------------------- label

#[derive(Args, Serialize)]
pub struct LabelArgs {
    /// Tokens file.
    #[arg(long)]
    tokens: PathBuf,
    /// Region annotation file.
    #[arg(long)]
    annotations: PathBuf,
    /// Labels file to write.
    #[arg(long)]
    out: PathBuf,
    /// Largest gap in points between a caption and its table or image.
    #[arg(long, default_value_t = tabgraph::dataset::DEFAULT_CAPTION_GAP)]
    caption_gap: f64,
    /// Skip the caption heuristic.
    #[arg(long)]
    no_captions: bool,
}

pub fn label(a: &LabelArgs) -> Result<()> {
    let mut run = Run::new("label");
    let tokens = load_tokens(&mut run, &a.tokens)?;
    let ann_text = run.read_string(&a.annotations)?;
    let ann = AnnotationFile::from_json(&ann_text)
        .with_context(|| format!("cannot parse {}", a.annotations.display()))?;
    if ann.doc_id != tokens.doc_id {
        log::warn!("annotation doc_id {:?} differs from tokens doc_id {:?}", ann.doc_id, tokens.doc_id);
    }
    let pages: Vec<LabeledPage> = tokens
        .pages
        .iter()
        .map(|p| {
            let regions: Vec<RegionAnnotation> = ann.regions_for(p.page_no);
            let lp = assign_labels(p, &regions);
            if a.no_captions {
                lp
            } else {
                caption_heuristic(&lp, &regions, a.caption_gap)
            }
        })
        .collect();
    let file = LabeledCorpusFile::from_labeled(&tokens.doc_id, &tokens_reference(&a.tokens, &a.out)?, &pages);
    run.write(&a.out, file.to_json() + "\n");
    run.commit(a)?;
    Ok(())
}

// ---------------------------------------------------------------- synth

#[derive(Args, Serialize)]
pub struct SynthArgs {
    /// Number of pages.
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving the tokens, annotations, labels and tables files.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value = "synth")]
    doc_id: String,
}

pub fn synth(a: &SynthArgs) -> Result<()> {
    ensure!(a.n >= 1, "--n must be at least 1");
    let mut run = Run::new("synth");
    let pages = generate_synthetic_pages(a.n, a.seed);
    let tokens = TokensFile::new(&a.doc_id, pages.iter().map(|p| p.page().clone()).collect());
    let ann = AnnotationFile {
        doc_id: a.doc_id.clone(),
        regions: pages.iter().flat_map(|p| p.regions.clone()).collect(),
    };
    let labeled: Vec<LabeledPage> = pages.iter().map(|p| p.labeled.clone()).collect();
    let tokens_name = format!("{}.tokens.json", a.doc_id);
    let labels = LabeledCorpusFile::from_labeled(&a.doc_id, &tokens_name, &labeled);
    let tables = TableCorpus {
        tables: pages.iter().map(|p| p.table.clone()).collect(),
    };
    let d = &a.out_dir;
    run.write(d.join(&tokens_name), tokens.to_json() + "\n");
    run.write(d.join(format!("{}.annotations.json", a.doc_id)), ann.to_json() + "\n");
    run.write(d.join(format!("{}.labels.json", a.doc_id)), labels.to_json() + "\n");
    run.write(d.join(format!("{}.tables.json", a.doc_id)), tables.to_json() + "\n");
    run.commit(a)?;
    Ok(())
}

// ---------------------------------------------------------------- build-graphs

#[derive(Args, Serialize)]
pub struct BuildGraphsArgs {
    /// Tokens file (unlabeled graphs).
    #[arg(long, required_unless_present = "labels", conflicts_with = "labels")]
    tokens: Option<PathBuf>,
    /// Labels file; its tokens file is read too.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// bbox | bbox+repr | bbox+ext | bbox+repr+ext
    #[arg(long, default_value = "bbox+repr", value_parser = parse_features)]
    features: FeatureSet,
    /// Embeddings file from repr-train.
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Drop Text nodes more than this many hops from other labels.
    #[arg(long, requires = "labels")]
    prune_islands: Option<usize>,
    /// Graph cache to write.
    #[arg(long)]
    out: PathBuf,
}

pub fn build_graphs(a: &BuildGraphsArgs) -> Result<()> {
    let mut run = Run::new("build-graphs");
    let (tokens, labels) = match (&a.tokens, &a.labels) {
        (_, Some(l)) => {
            let (labels, tokens) = load_labels(&mut run, l)?;
            let joined = labels.join(&tokens)?;
            let pages = joined.iter().map(|p| p.page.clone()).collect();
            let labels: Vec<Vec<TokenLabel>> = joined.into_iter().map(|p| p.labels).collect();
            (TokensFile::new(&tokens.doc_id, pages), Some(labels))
        }
        (Some(t), None) => (load_tokens(&mut run, t)?, None),
        (None, None) => bail!("either --tokens or --labels is required"),
    };
    let vocab = load_vocab(&mut run, a.vocab.as_deref(), a.features)?;
    let (layout, mut graphs) =
        featurize_document(&tokens.pages, labels.as_deref(), a.features, vocab.as_ref())?;
    if let Some(k) = a.prune_islands {
        graphs = graphs
            .iter()
            .map(|g| prune_islands(g, k))
            .collect::<tabgraph::Result<_>>()?;
    }
    let cache = GraphCache {
        doc_id: tokens.doc_id.clone(),
        feature_set: a.features,
        layout,
        graphs,
    };
    run.write(&a.out, cache.to_bytes());
    run.commit(a)?;
    Ok(())
}

// ---------------------------------------------------------------- repr-train

#[derive(Args, Serialize)]
pub struct ReprTrainArgs {
    /// Table corpus files.
    #[arg(long, required = true, num_args = 1..)]
    tables: Vec<PathBuf>,
    /// Embeddings file to write.
    #[arg(long)]
    out: PathBuf,
    /// Embedding width R.
    #[arg(long, default_value_t = 80)]
    dim: usize,
    /// Number of frequent representations clustered into prototypes.
    #[arg(long, default_value_t = 2000)]
    top_l: usize,
    /// headers | rhombus | rhombus-diagonal | linear
    #[arg(long, default_value = "rhombus", value_parser = parse_mode)]
    mode: PatternMode,
    #[arg(long, default_value_t = 20)]
    epochs: usize,
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 0.025)]
    lr: f64,
    #[arg(long, default_value_t = 0.7)]
    damping: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Serialize)]
struct FitSummary<'a> {
    prototypes: Vec<&'a str>,
    distinct_representations: usize,
    fewer_than_l: bool,
    affinity_converged: bool,
    affinity_iterations: usize,
    windows: usize,
    loss_curve: &'a [f64],
}

pub fn repr_train(a: &ReprTrainArgs) -> Result<()> {
    let mut run = Run::new("repr-train");
    let mut tables = Vec::new();
    for p in &a.tables {
        let s = run.read_string(p)?;
        tables.extend(
            TableCorpus::from_json(&s)
                .with_context(|| format!("cannot parse {}", p.display()))?
                .tables,
        );
    }
    let config = VocabConfig {
        top_l: a.top_l,
        mode: a.mode,
        affinity: AffinityConfig {
            damping: a.damping,
            ..AffinityConfig::default()
        },
        skipgram: SkipGramConfig {
            dim: a.dim,
            epochs: a.epochs,
            negatives: a.negatives,
            learning_rate: a.lr,
            seed: a.seed,
        },
    };
    let (vocab, report) = ReprVocabulary::fit(&tables, &config)?;
    if !report.affinity_converged {
        log::warn!("affinity propagation did not converge; using its last exemplars");
    }
    let summary = FitSummary {
        prototypes: vocab.prototypes().iter().map(|p| p.as_str()).collect(),
        distinct_representations: vocab.frequency_rank().len(),
        fewer_than_l: report.fewer_than_l,
        affinity_converged: report.affinity_converged,
        affinity_iterations: report.affinity_iterations,
        windows: report.windows,
        loss_curve: &report.loss_curve,
    };
    run.write(&a.out, vocab.to_bytes());
    run.write(sibling(&a.out, "report.json"), json_bytes(&summary)?);
    run.commit(a)?;
    Ok(())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".");
    name.push(suffix);
    path.with_file_name(name)
}

// ---------------------------------------------------------------- gnn-train

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SizingMode {
    Base,
    Padding,
    Scaled,
}

#[derive(Args, Serialize)]
pub struct GnnTrainArgs {
    /// Labels files; graphs are built with --features.
    #[arg(long, num_args = 1.., required_unless_present = "graphs", conflicts_with = "graphs")]
    labels: Vec<PathBuf>,
    /// Labeled graph caches from build-graphs.
    #[arg(long, num_args = 1..)]
    graphs: Vec<PathBuf>,
    /// bbox | bbox+repr | bbox+ext | bbox+repr+ext
    #[arg(long, default_value = "bbox+repr", value_parser = parse_features)]
    features: FeatureSet,
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Checkpoint to write; the loss curve goes to `<out>.loss.json`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = SizingMode::Base)]
    sizing: SizingMode,
    /// Hidden width for base and padding sizing.
    #[arg(long, default_value_t = gnn::BASE_HIDDEN)]
    h_dim: usize,
    /// Weight budget for scaled sizing.
    #[arg(long, default_value_t = 100_000)]
    p_no: usize,
    /// Input width for padding sizing.
    #[arg(long, default_value_t = gnn::PADDED_IN_DIM)]
    pad_to: usize,
    #[arg(long, default_value_t = 4)]
    layers: usize,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Share of pages held out for validation accuracy.
    #[arg(long, default_value_t = 0.05)]
    val_fraction: f64,
    /// Hop budget for island pruning of training pages.
    #[arg(long, default_value_t = tabgraph::graph_builder::DEFAULT_ISLAND_HOPS)]
    island_hops: usize,
    #[arg(long)]
    no_prune: bool,
    /// Keep training pages without table tokens.
    #[arg(long)]
    keep_tableless: bool,
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    dims: &'a [usize],
    weights: usize,
    biases: usize,
    feature_set: FeatureSet,
    train_pages: usize,
    val_pages: usize,
    dropped_tableless: usize,
    loss_curve: &'a [f64],
    val_accuracy: &'a [f64],
}

fn labeled_graphs(
    run: &mut Run,
    labels: &[PathBuf],
    set: FeatureSet,
    vocab: Option<&ReprVocabulary>,
) -> Result<(FeatureLayout, Vec<PageGraph>)> {
    let mut layout: Option<FeatureLayout> = None;
    let mut graphs = Vec::new();
    for path in labels {
        let (file, tokens) = load_labels(run, path)?;
        let joined = file.join(&tokens)?;
        let pages: Vec<_> = joined.iter().map(|p| p.page.clone()).collect();
        let labels: Vec<Vec<TokenLabel>> = joined.into_iter().map(|p| p.labels).collect();
        let (l, g) = featurize_document(&pages, Some(&labels), set, vocab)?;
        if !pages.is_empty() {
            match layout {
                Some(prev) if prev != l => bail!("{} has feature layout {l:?}, expected {prev:?}", path.display()),
                _ => layout = Some(l),
            }
        }
        graphs.extend(g);
    }
    Ok((layout.unwrap_or_default(), graphs))
}

fn cached_graphs(run: &mut Run, paths: &[PathBuf]) -> Result<(FeatureSet, FeatureLayout, Vec<PageGraph>)> {
    let mut meta: Option<(FeatureSet, FeatureLayout)> = None;
    let mut graphs = Vec::new();
    for p in paths {
        let bytes = run.read(p)?;
        let cache = GraphCache::from_bytes(&bytes).with_context(|| format!("cannot load {}", p.display()))?;
        match meta {
            Some(m) if m != (cache.feature_set, cache.layout) => {
                bail!("{} was built with different features", p.display())
            }
            _ => meta = Some((cache.feature_set, cache.layout)),
        }
        if cache.graphs.iter().any(|g| g.labels().is_none()) {
            bail!("{} holds unlabeled graphs", p.display());
        }
        graphs.extend(cache.graphs);
    }
    let (set, layout) = meta.context("no graph caches given")?;
    Ok((set, layout, graphs))
}

pub fn gnn_train(a: &GnnTrainArgs) -> Result<()> {
    ensure!(
        (0.0..1.0).contains(&a.val_fraction),
        "--val-fraction must be in [0, 1)"
    );
    let mut run = Run::new("gnn-train");
    let (set, layout, graphs) = if a.graphs.is_empty() {
        let vocab = load_vocab(&mut run, a.vocab.as_deref(), a.features)?;
        let (layout, graphs) = labeled_graphs(&mut run, &a.labels, a.features, vocab.as_ref())?;
        (a.features, layout, graphs)
    } else {
        cached_graphs(&mut run, &a.graphs)?
    };
    ensure!(!graphs.is_empty(), "no pages to train on");

    let mut order: Vec<usize> = (0..graphs.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(a.seed));
    let n_val = if a.val_fraction > 0.0 && graphs.len() >= 2 {
        ((graphs.len() as f64 * a.val_fraction).round() as usize).clamp(1, graphs.len() - 1)
    } else {
        0
    };
    let mut val_idx = order[..n_val].to_vec();
    let mut train_idx = order[n_val..].to_vec();
    val_idx.sort_unstable();
    train_idx.sort_unstable();
    let val: Vec<PageGraph> = val_idx.iter().map(|&i| graphs[i].clone()).collect();

    let mut dropped = 0;
    let mut train = Vec::with_capacity(train_idx.len());
    for &i in &train_idx {
        let g = &graphs[i];
        let has_table = g.labels().is_some_and(|l| l.iter().any(|x| x.is_table()));
        if !a.keep_tableless && !has_table {
            dropped += 1;
            continue;
        }
        train.push(if a.no_prune {
            g.clone()
        } else {
            prune_islands(g, a.island_hops)?
        });
    }
    ensure!(!train.is_empty(), "no training pages left (all {} tableless?)", dropped);

    let sizing = match a.sizing {
        SizingMode::Base => Sizing::Base { h_dim: a.h_dim },
        SizingMode::Padding => Sizing::Padding {
            in_dim: a.pad_to,
            h_dim: a.h_dim,
        },
        SizingMode::Scaled => Sizing::Scaled { p_no: a.p_no },
    };
    let config = GnnConfig {
        l_no: a.layers,
        sizing,
        in_dim: layout.width(),
        out_dim: TokenLabel::COUNT,
        learning_rate: a.lr,
        epochs: a.epochs,
        seed: a.seed,
    };
    let mut model = GnnModel::new(config)?;
    let report = gnn::train(&mut model, &train, &val)?;
    let (weights, biases) = model.param_counts();
    let summary = TrainSummary {
        dims: model.dims(),
        weights,
        biases,
        feature_set: set,
        train_pages: train.len(),
        val_pages: val.len(),
        dropped_tableless: dropped,
        loss_curve: &report.loss_curve,
        val_accuracy: &report.val_accuracy,
    };
    let loss = json_bytes(&summary)?;
    let ck = Checkpoint {
        model,
        feature_set: set,
        layout,
    };
    run.write(&a.out, ck.to_bytes());
    run.write(sibling(&a.out, "loss.json"), loss);
    run.commit(a)?;
    Ok(())
}

// ---------------------------------------------------------------- infer

#[derive(Args, Serialize)]
pub struct InferArgs {
    /// Checkpoint from gnn-train.
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    tokens: PathBuf,
    /// Embeddings file, required when the model uses representation features.
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Predicted labels file to write.
    #[arg(long)]
    out: PathBuf,
}

pub fn infer(a: &InferArgs) -> Result<()> {
    let mut run = Run::new("infer");
    let bytes = run.read(&a.model)?;
    let ck = Checkpoint::from_bytes(&bytes).with_context(|| format!("cannot load {}", a.model.display()))?;
    let tokens = load_tokens(&mut run, &a.tokens)?;
    let vocab = load_vocab(&mut run, a.vocab.as_deref(), ck.feature_set)?;
    if let Some(v) = &vocab {
        ensure!(
            !ck.feature_set.uses_repr() || v.dim() == ck.layout.repr_dim,
            "vocabulary width {} does not match the model's {}",
            v.dim(),
            ck.layout.repr_dim
        );
    }
    let (layout, graphs) = featurize_document(&tokens.pages, None, ck.feature_set, vocab.as_ref())?;
    if tokens.pages.iter().any(|p| !p.tokens.is_empty()) {
        ensure!(
            layout == ck.layout,
            "document features {layout:?} do not match the model's {:?}",
            ck.layout
        );
    }
    let pages = graphs
        .iter()
        .map(|g| {
            let pred = gnn::infer(&ck.model, g)?;
            Ok(tabgraph::dataset::LabeledCorpusPage {
                page_no: g.page_no,
                labels: pred.iter().map(|p| p.0).collect(),
                probabilities: Some(pred.iter().map(|p| p.1).collect()),
            })
        })
        .collect::<tabgraph::Result<Vec<_>>>()?;
    let file = LabeledCorpusFile {
        doc_id: tokens.doc_id.clone(),
        tokens_file: tokens_reference(&a.tokens, &a.out)?,
        pages,
    };
    run.write(&a.out, file.to_json() + "\n");
    run.commit(a)?;
    Ok(())
}

// ---------------------------------------------------------------- eval

#[derive(Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Metrics JSON to write; a text report goes to `<out>.txt`.
    #[arg(long)]
    out: PathBuf,
}

pub fn eval(a: &EvalArgs) -> Result<()> {
    let mut run = Run::new("eval");
    let parse = |run: &mut Run, p: &Path| -> Result<LabeledCorpusFile> {
        let s = run.read_string(p)?;
        LabeledCorpusFile::from_json(&s).with_context(|| format!("cannot parse {}", p.display()))
    };
    let gold = parse(&mut run, &a.gold)?;
    let pred = parse(&mut run, &a.pred)?;
    let (mut g, mut p) = (Vec::new(), Vec::new());
    for gp in &gold.pages {
        let pp = pred
            .pages
            .iter()
            .find(|x| x.page_no == gp.page_no)
            .with_context(|| format!("page {} has no predictions", gp.page_no))?;
        ensure!(
            gp.labels.len() == pp.labels.len(),
            "page {}: {} gold labels but {} predictions",
            gp.page_no,
            gp.labels.len(),
            pp.labels.len()
        );
        g.extend_from_slice(&gp.labels);
        p.extend_from_slice(&pp.labels);
    }
    let report = compute_metrics(&g, &p)?;
    let text = report.text_report();
    print!("{text}");
    run.write(&a.out, report.to_json() + "\n");
    run.write(sibling(&a.out, "txt"), text);
    run.commit(a)?;
    Ok(())
}

// ---------------------------------------------------------------- render

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RenderMode {
    /// One box per token.
    Tokens,
    /// Extractor blocks with majority labels.
    Blocks,
    /// Label-connected components with majority labels.
    Components,
}

#[derive(Args, Serialize)]
pub struct RenderArgs {
    /// Labels file (gold or predicted).
    #[arg(long)]
    labels: PathBuf,
    /// Directory receiving one SVG per page.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = RenderMode::Tokens)]
    mode: RenderMode,
}

pub fn render(a: &RenderArgs) -> Result<()> {
    let mut run = Run::new("render");
    let (labels, tokens) = load_labels(&mut run, &a.labels)?;
    let pages = labels.join(&tokens)?;
    ensure!(!pages.is_empty(), "no pages to render");
    for lp in &pages {
        let svg = match a.mode {
            RenderMode::Tokens => render_tokens(&lp.page, &lp.labels),
            RenderMode::Blocks => render_blocks(&lp.page, &group_blocks(&lp.page, &lp.labels)?.blocks),
            RenderMode::Components => {
                render_blocks(&lp.page, &group_components(&lp.page, &lp.labels)?.blocks)
            }
        };
        run.write(a.out_dir.join(format!("page-{:04}.svg", lp.page.page_no)), svg);
    }
    run.commit(a)?;
    Ok(())
}
