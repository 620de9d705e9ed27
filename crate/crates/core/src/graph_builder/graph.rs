use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::binfmt;
use crate::doc_model::TokenLabel;
use crate::error::{Error, Result};

use super::features::{FeatureLayout, FeatureSet};

/// Node features, optional labels and weighted undirected edges of one page.
#[derive(Debug, Clone, PartialEq)]
pub struct PageGraph {
    pub page_no: u32,
    /// One row per node.
    features: Array2<f64>,
    labels: Option<Vec<TokenLabel>>,
    /// `(u, v, w)` with `u < v`, sorted, no duplicates.
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    /// Source token id of every node (differs from the node index after
    /// pruning).
    token_ids: Vec<u32>,
    layout: FeatureLayout,
}

impl PageGraph {
    pub fn new(
        page_no: u32,
        features: Array2<f64>,
        labels: Option<Vec<TokenLabel>>,
        mut edges: Vec<(usize, usize, f64)>,
        token_ids: Vec<u32>,
        layout: FeatureLayout,
    ) -> Result<Self> {
        let n = features.nrows();
        if token_ids.len() != n {
            return Err(Error::invalid("one token id per node required"));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::invalid(format!("{} labels for {n} nodes", l.len())));
            }
        }
        if features.ncols() != layout.width() {
            return Err(Error::WidthMismatch {
                expected: layout.width(),
                actual: features.ncols(),
            });
        }
        edges.sort_by_key(|e| (e.0, e.1));
        for w in edges.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::invalid(format!("duplicate edge {:?}", (w[0].0, w[0].1))));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= v || v >= n {
                return Err(Error::invalid(format!("bad edge ({u}, {v}) for {n} nodes")));
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::invalid(format!("edge weight {w} outside [0, 1]")));
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        Ok(PageGraph {
            page_no,
            features,
            labels,
            edges,
            adjacency,
            token_ids,
            layout,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.features.nrows()
    }

    pub fn feature_width(&self) -> usize {
        self.features.ncols()
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> Option<&[TokenLabel]> {
        self.labels.as_deref()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Neighbours of `v` with the connecting edge weight.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn token_ids(&self) -> &[u32] {
        &self.token_ids
    }

    pub fn layout(&self) -> FeatureLayout {
        self.layout
    }

    /// Same graph with every edge weight multiplied by `c`.
    pub fn with_scaled_weights(&self, c: f64) -> PageGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.2 *= c;
        }
        for adj in &mut g.adjacency {
            for e in adj.iter_mut() {
                e.1 *= c;
            }
        }
        g
    }
}

const MAGIC: &[u8; 4] = b"TGGR";
pub const GRAPH_CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    doc_id: String,
    feature_set: FeatureSet,
    repr_dim: usize,
    ext_dim: usize,
    normalization: String,
    pages: Vec<CachePage>,
}

#[derive(Serialize, Deserialize)]
struct CachePage {
    page_no: u32,
    nodes: usize,
    edges: usize,
    labels: Option<Vec<TokenLabel>>,
    token_ids: Vec<u32>,
}

/// Describes how geometric features were scaled.
pub const NORMALIZATION: &str = "x1,x2,w,xc / page_width; y1,y2,h,yc / page_height; area / (page_width*page_height)";

/// All page graphs of one document, as written by `build-graphs`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCache {
    pub doc_id: String,
    pub feature_set: FeatureSet,
    pub layout: FeatureLayout,
    pub graphs: Vec<PageGraph>,
}

impl GraphCache {
    pub fn to_bytes(&self) -> Vec<u8> {
        let header = CacheHeader {
            doc_id: self.doc_id.clone(),
            feature_set: self.feature_set,
            repr_dim: self.layout.repr_dim,
            ext_dim: self.layout.ext_dim,
            normalization: NORMALIZATION.to_string(),
            pages: self
                .graphs
                .iter()
                .map(|g| CachePage {
                    page_no: g.page_no,
                    nodes: g.num_nodes(),
                    edges: g.edges.len(),
                    labels: g.labels.clone(),
                    token_ids: g.token_ids.clone(),
                })
                .collect(),
        };
        let mut w = binfmt::Writer::new(MAGIC, GRAPH_CACHE_VERSION, &header);
        for g in &self.graphs {
            w.f32s(g.features.iter().map(|&v| v as f32));
            w.u32s(g.edges.iter().flat_map(|&(u, v, _)| [u as u32, v as u32]).collect::<Vec<_>>().into_iter());
            w.f32s(g.edges.iter().map(|e| e.2 as f32));
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (h, mut r): (CacheHeader, _) =
            binfmt::Reader::open(bytes, MAGIC, GRAPH_CACHE_VERSION, "graph cache")?;
        let layout = FeatureLayout {
            repr_dim: h.repr_dim,
            ext_dim: h.ext_dim,
        };
        let mut graphs = Vec::with_capacity(h.pages.len());
        for p in h.pages {
            let feats = r.f32s(p.nodes * layout.width())?;
            let ends = r.u32s(p.edges * 2)?;
            let weights = r.f32s(p.edges)?;
            let features = Array2::from_shape_vec(
                (p.nodes, layout.width()),
                feats.into_iter().map(f64::from).collect(),
            )
            .expect("length checked");
            let edges = ends
                .chunks_exact(2)
                .zip(weights)
                .map(|(e, w)| (e[0] as usize, e[1] as usize, f64::from(w)))
                .collect();
            graphs.push(PageGraph::new(p.page_no, features, p.labels, edges, p.token_ids, layout)?);
        }
        r.finish()?;
        Ok(GraphCache {
            doc_id: h.doc_id,
            feature_set: h.feature_set,
            layout,
            graphs,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(fs::write(path, self.to_bytes())?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}
