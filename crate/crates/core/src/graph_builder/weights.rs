use crate::doc_model::{BBox, Page};

use super::visibility::{relation, Axis};

/// Distance between two related boxes along their shared axis, clamped at 0
/// for touching or overlapping boxes.
///
/// Vertical relations use `max(y1) - min(y2)`, horizontal ones
/// `max(x1) - min(x2)`. Unrelated boxes (never produced by the visibility
/// builder) fall back to the larger of the two axis gaps.
pub fn edge_gap(a: &BBox, b: &BBox) -> f64 {
    let vertical = a.y1.max(b.y1) - a.y2.min(b.y2);
    let horizontal = a.x1.max(b.x1) - a.x2.min(b.x2);
    let d = match relation(a, b) {
        Some(Axis::Vertical) => vertical,
        Some(Axis::Horizontal) => horizontal,
        None => vertical.max(horizontal),
    };
    d.max(0.0)
}

/// `w = 1 - d / max(d)` over the given edges; all ones when every gap is 0.
pub fn weights_from_gaps(gaps: &[f64]) -> Vec<f64> {
    let max = gaps.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return vec![1.0; gaps.len()];
    }
    gaps.iter().map(|d| (1.0 - d / max).clamp(0.0, 1.0)).collect()
}

/// Attaches a weight to every edge, normalizing by the page's largest gap.
pub fn weight_edges(page: &Page, edges: &[(usize, usize)]) -> Vec<(usize, usize, f64)> {
    let gaps: Vec<f64> = edges
        .iter()
        .map(|&(u, v)| edge_gap(&page.tokens[u].bbox, &page.tokens[v].bbox))
        .collect();
    edges
        .iter()
        .zip(weights_from_gaps(&gaps))
        .map(|(&(u, v), w)| (u, v, w))
        .collect()
}
