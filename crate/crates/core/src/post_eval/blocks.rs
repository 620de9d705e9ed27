use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::doc_model::{BBox, Page, TokenLabel};
use crate::error::{Error, Result};
use crate::graph_builder::build_visibility_edges;

/// Tokens sharing a block with the block's majority label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPrediction {
    pub block_id: i64,
    pub bbox: BBox,
    pub label: TokenLabel,
    /// Token ids, ascending.
    pub members: Vec<u32>,
    /// Share of members voting for `label`.
    pub vote: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockGrouping {
    pub blocks: Vec<BlockPrediction>,
    /// Pairs of block ids whose boxes overlap with positive area.
    pub overlaps: Vec<(i64, i64)>,
}

/// Majority label of `labels`; ties go to the label with the higher
/// priority.
pub fn majority(labels: &[TokenLabel]) -> (TokenLabel, usize) {
    let mut counts = [0usize; TokenLabel::COUNT];
    for l in labels {
        counts[l.index()] += 1;
    }
    TokenLabel::PRIORITY
        .iter()
        .map(|&l| (l, counts[l.index()]))
        .fold((TokenLabel::Other, 0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

fn check_len(page: &Page, predictions: &[TokenLabel]) -> Result<()> {
    if page.tokens.len() != predictions.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} tokens",
            predictions.len(),
            page.tokens.len()
        )));
    }
    Ok(())
}

fn build(page: &Page, predictions: &[TokenLabel], groups: BTreeMap<i64, Vec<usize>>) -> BlockGrouping {
    let blocks: Vec<BlockPrediction> = groups
        .into_iter()
        .map(|(block_id, members)| {
            let labels: Vec<TokenLabel> = members.iter().map(|&i| predictions[i]).collect();
            let (label, votes) = majority(&labels);
            let bbox = members
                .iter()
                .map(|&i| page.tokens[i].bbox)
                .reduce(|a, b| a.union(&b))
                .expect("non-empty group");
            BlockPrediction {
                block_id,
                bbox,
                label,
                members: members.iter().map(|&i| page.tokens[i].id).collect(),
                vote: votes as f64 / members.len() as f64,
            }
        })
        .collect();
    let mut overlaps = Vec::new();
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            if a.bbox.intersection_area(&b.bbox) > 0.0 {
                overlaps.push((a.block_id, b.block_id));
            }
        }
    }
    BlockGrouping { blocks, overlaps }
}

/// Groups tokens by their extractor block id.
pub fn group_blocks(page: &Page, predictions: &[TokenLabel]) -> Result<BlockGrouping> {
    check_len(page, predictions)?;
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, t) in page.tokens.iter().enumerate() {
        groups.entry(t.block_id).or_default().push(i);
    }
    Ok(build(page, predictions, groups))
}

/// Groups tokens into connected components of visibility edges whose ends
/// share a predicted label, for pages without extractor blocks. Component
/// ids count from 0 in order of their first token.
pub fn group_components(page: &Page, predictions: &[TokenLabel]) -> Result<BlockGrouping> {
    check_len(page, predictions)?;
    let n = page.tokens.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v) in build_visibility_edges(page) {
        if predictions[u] == predictions[v] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut ids: BTreeMap<usize, i64> = BTreeMap::new();
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let next = ids.len() as i64;
        let id = *ids.entry(root).or_insert(next);
        groups.entry(id).or_default().push(i);
    }
    Ok(build(page, predictions, groups))
}
