use std::collections::VecDeque;

use ndarray::Axis as NdAxis;

use crate::doc_model::TokenLabel;
use crate::error::{Error, Result};

use super::graph::PageGraph;

pub const DEFAULT_ISLAND_HOPS: usize = 2;

/// `true` for nodes to keep: every non-Text node, and Text nodes within `k`
/// hops of some non-Text node.
pub fn island_mask(n: usize, adjacency: impl Fn(usize) -> Vec<usize>, labels: &[TokenLabel], k: usize) -> Vec<bool> {
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if labels[v] != TokenLabel::Text {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if dist[v] >= k {
            continue;
        }
        for u in adjacency(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist.iter().map(|&d| d <= k).collect()
}

/// Drops Text nodes farther than `k` hops from any differently labeled node.
/// Survivors are re-indexed in their original order; edge weights are kept.
pub fn prune_islands(graph: &PageGraph, k: usize) -> Result<PageGraph> {
    let labels = graph
        .labels()
        .ok_or_else(|| Error::invalid("island pruning needs labels"))?;
    let n = graph.num_nodes();
    let keep = island_mask(
        n,
        |v| graph.neighbors(v).iter().map(|&(u, _)| u).collect(),
        labels,
        k,
    );
    let mut new_index = vec![usize::MAX; n];
    let kept: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    for (i, &v) in kept.iter().enumerate() {
        new_index[v] = i;
    }
    let features = graph.features().select(NdAxis(0), &kept);
    let edges = graph
        .edges()
        .iter()
        .filter(|&&(u, v, _)| keep[u] && keep[v])
        .map(|&(u, v, w)| (new_index[u], new_index[v], w))
        .collect();
    PageGraph::new(
        graph.page_no,
        features,
        Some(kept.iter().map(|&v| labels[v]).collect()),
        edges,
        kept.iter().map(|&v| graph.token_ids()[v]).collect(),
        graph.layout(),
    )
}
