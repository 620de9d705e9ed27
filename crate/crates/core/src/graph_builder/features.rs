use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::doc_model::{Page, Token, TokenLabel};
use crate::error::{Error, Result};
use crate::repr_embed::ReprVocabulary;

use super::graph::PageGraph;
use super::visibility::build_visibility_edges;
use super::weights::weight_edges;

pub const GEOMETRIC_DIM: usize = 9;
pub const TEXT_STATS_DIM: usize = 3;
/// Geometric, text statistics and the image flag.
pub const BASE_DIM: usize = GEOMETRIC_DIM + TEXT_STATS_DIM + 1;

/// Which optional blocks are appended to the base features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureSet {
    #[serde(rename = "bbox")]
    Bbox,
    #[serde(rename = "bbox+repr")]
    BboxRepr,
    #[serde(rename = "bbox+ext")]
    BboxExt,
    #[serde(rename = "bbox+repr+ext")]
    BboxReprExt,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 4] = [
        FeatureSet::Bbox,
        FeatureSet::BboxRepr,
        FeatureSet::BboxExt,
        FeatureSet::BboxReprExt,
    ];

    pub fn uses_repr(self) -> bool {
        matches!(self, FeatureSet::BboxRepr | FeatureSet::BboxReprExt)
    }

    pub fn uses_ext(self) -> bool {
        matches!(self, FeatureSet::BboxExt | FeatureSet::BboxReprExt)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::Bbox => "bbox",
            FeatureSet::BboxRepr => "bbox+repr",
            FeatureSet::BboxExt => "bbox+ext",
            FeatureSet::BboxReprExt => "bbox+repr+ext",
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureSet::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown feature set {s:?}")))
    }
}

/// Widths of the optional feature blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeatureLayout {
    pub repr_dim: usize,
    pub ext_dim: usize,
}

impl FeatureLayout {
    pub fn width(&self) -> usize {
        BASE_DIM + self.repr_dim + self.ext_dim
    }
}

/// `<x1, y1, x2, y2, w, h, xc, yc, area>` scaled by the page size.
pub fn geometric_features(token: &Token, page_width: f64, page_height: f64) -> [f64; GEOMETRIC_DIM] {
    let b = &token.bbox;
    let (xc, yc) = b.center();
    [
        b.x1 / page_width,
        b.y1 / page_height,
        b.x2 / page_width,
        b.y2 / page_height,
        b.width() / page_width,
        b.height() / page_height,
        xc / page_width,
        yc / page_height,
        b.area() / (page_width * page_height),
    ]
}

/// Fractions of letters, digits and everything else.
pub fn text_stats(text: &str) -> [f64; TEXT_STATS_DIM] {
    let (mut letters, mut digits, mut total) = (0usize, 0usize, 0usize);
    for c in text.chars() {
        total += 1;
        if c.is_alphabetic() {
            letters += 1;
        } else if c.is_numeric() {
            digits += 1;
        }
    }
    if total == 0 {
        return [0.0; 3];
    }
    let t = total as f64;
    [
        letters as f64 / t,
        digits as f64 / t,
        (total - letters - digits) as f64 / t,
    ]
}

fn ext_width(page: &Page) -> Result<usize> {
    let mut width: Option<usize> = None;
    for t in &page.tokens {
        if let Some(e) = &t.ext_embedding {
            match width {
                None => width = Some(e.len()),
                Some(w) if w != e.len() => {
                    return Err(Error::WidthMismatch {
                        expected: w,
                        actual: e.len(),
                    })
                }
                _ => {}
            }
        }
    }
    let width = width.ok_or_else(|| {
        Error::invalid(format!("page {}: no token carries ext_embedding", page.page_no))
    })?;
    if let Some(t) = page
        .tokens
        .iter()
        .find(|t| t.ext_embedding.is_none() && !t.is_image)
    {
        return Err(Error::invalid(format!(
            "page {}: token {} lacks ext_embedding while others have it",
            page.page_no, t.id
        )));
    }
    Ok(width)
}

/// Builds the page graph: visibility edges, edge weights and node features in
/// the order `[geometric | text_stats | image_flag | repr | ext]`.
///
/// `vocab` is required when `set` uses representation embeddings. Image
/// tokens get a zero representation block and, when they carry no external
/// vector, a zero ext block.
pub fn featurize(
    page: &Page,
    labels: Option<&[TokenLabel]>,
    set: FeatureSet,
    vocab: Option<&ReprVocabulary>,
) -> Result<PageGraph> {
    let repr_dim = if set.uses_repr() {
        vocab
            .ok_or_else(|| Error::invalid(format!("feature set {set} needs a vocabulary")))?
            .dim()
    } else {
        0
    };
    let ext_dim = if set.uses_ext() && !page.tokens.is_empty() {
        ext_width(page)?
    } else {
        0
    };
    featurize_with_layout(page, labels, set, vocab, FeatureLayout { repr_dim, ext_dim })
}

/// Like [`featurize`] but with a fixed layout, so pages without tokens (or
/// documents mixing pages) agree on the width.
pub fn featurize_with_layout(
    page: &Page,
    labels: Option<&[TokenLabel]>,
    set: FeatureSet,
    vocab: Option<&ReprVocabulary>,
    layout: FeatureLayout,
) -> Result<PageGraph> {
    if let Some(l) = labels {
        if l.len() != page.tokens.len() {
            return Err(Error::invalid(format!(
                "page {}: {} labels for {} tokens",
                page.page_no,
                l.len(),
                page.tokens.len()
            )));
        }
    }
    if set.uses_repr() && (layout.repr_dim == 0 || vocab.is_none()) {
        return Err(Error::invalid(format!(
            "feature set {set} needs a vocabulary with positive width"
        )));
    }
    let n = page.tokens.len();
    let mut features = Array2::zeros((n, layout.width()));
    for (i, t) in page.tokens.iter().enumerate() {
        let mut row = features.row_mut(i);
        let geo = geometric_features(t, page.width, page.height);
        let stats = if t.is_image { [0.0; 3] } else { text_stats(&t.text) };
        for (k, v) in geo.iter().chain(stats.iter()).enumerate() {
            row[k] = *v;
        }
        row[BASE_DIM - 1] = if t.is_image { 1.0 } else { 0.0 };
        let mut off = BASE_DIM;
        if set.uses_repr() && !t.is_image {
            let v = vocab.expect("checked above").lookup(&t.text);
            if v.len() != layout.repr_dim {
                return Err(Error::WidthMismatch {
                    expected: layout.repr_dim,
                    actual: v.len(),
                });
            }
            for (k, x) in v.into_iter().enumerate() {
                row[off + k] = x;
            }
        }
        off += layout.repr_dim;
        if set.uses_ext() {
            match &t.ext_embedding {
                Some(e) if e.len() == layout.ext_dim => {
                    for (k, x) in e.iter().enumerate() {
                        row[off + k] = f64::from(*x);
                    }
                }
                Some(e) => {
                    return Err(Error::WidthMismatch {
                        expected: layout.ext_dim,
                        actual: e.len(),
                    })
                }
                None if t.is_image => {}
                None => {
                    return Err(Error::invalid(format!(
                        "page {}: token {} lacks ext_embedding",
                        page.page_no, t.id
                    )))
                }
            }
        }
    }
    let edges = weight_edges(page, &build_visibility_edges(page));
    PageGraph::new(
        page.page_no,
        features,
        labels.map(<[_]>::to_vec),
        edges,
        page.tokens.iter().map(|t| t.id).collect(),
        layout,
    )
}

/// Featurizes every page of a document with one shared layout; pages are
/// processed in parallel. `labels`, when given, is parallel to `pages`.
pub fn featurize_document(
    pages: &[Page],
    labels: Option<&[Vec<TokenLabel>]>,
    set: FeatureSet,
    vocab: Option<&ReprVocabulary>,
) -> Result<(FeatureLayout, Vec<PageGraph>)> {
    if let Some(l) = labels {
        if l.len() != pages.len() {
            return Err(Error::invalid(format!("{} label lists for {} pages", l.len(), pages.len())));
        }
    }
    let repr_dim = if set.uses_repr() {
        vocab
            .ok_or_else(|| Error::invalid(format!("feature set {set} needs a vocabulary")))?
            .dim()
    } else {
        0
    };
    let mut ext_dim = None;
    if set.uses_ext() {
        for p in pages.iter().filter(|p| p.tokens.iter().any(|t| t.ext_embedding.is_some())) {
            let w = ext_width(p)?;
            match ext_dim {
                Some(d) if d != w => return Err(Error::WidthMismatch { expected: d, actual: w }),
                _ => ext_dim = Some(w),
            }
        }
        if ext_dim.is_none() && pages.iter().any(|p| !p.tokens.is_empty()) {
            return Err(Error::invalid("feature set uses ext but no token carries ext_embedding"));
        }
    }
    let layout = FeatureLayout {
        repr_dim,
        ext_dim: ext_dim.unwrap_or(0),
    };
    let graphs = pages
        .par_iter()
        .enumerate()
        .map(|(i, p)| featurize_with_layout(p, labels.map(|l| l[i].as_slice()), set, vocab, layout))
        .collect::<Result<Vec<_>>>()?;
    Ok((layout, graphs))
}
