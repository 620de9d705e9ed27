//! Visibility edges between token boxes.
//!
//! Two boxes are vertically related when their horizontal projections share a
//! segment of positive length; otherwise they are horizontally related when
//! their vertical projections do. Along the related axis, the box with the
//! smaller center (ties: smaller index) comes first.
//!
//! A vertically related pair sees each other when some vertical line through
//! the open shared strip crosses the gap between them without touching a third
//! box. Boxes that touch or overlap along the axis always see each other.
//! Each node keeps only its nearest visible neighbour (smallest gap, then
//! smallest index) in each of the four directions; the edge set is the union
//! of those choices.

use crate::doc_model::{BBox, Page};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Above/below.
    Vertical,
    /// Left/right.
    Horizontal,
}

/// Which axis relates the two boxes, if any.
pub fn relation(a: &BBox, b: &BBox) -> Option<Axis> {
    if a.x_overlap(b) > 0.0 {
        Some(Axis::Vertical)
    } else if a.y_overlap(b) > 0.0 {
        Some(Axis::Horizontal)
    } else {
        None
    }
}

/// View of a box with the related axis mapped onto "along" and the other
/// axis onto "across".
#[derive(Clone, Copy)]
struct Oriented {
    along_lo: f64,
    along_hi: f64,
    across_lo: f64,
    across_hi: f64,
}

fn orient(b: &BBox, axis: Axis) -> Oriented {
    match axis {
        Axis::Vertical => Oriented {
            along_lo: b.y1,
            along_hi: b.y2,
            across_lo: b.x1,
            across_hi: b.x2,
        },
        Axis::Horizontal => Oriented {
            along_lo: b.x1,
            along_hi: b.x2,
            across_lo: b.y1,
            across_hi: b.y2,
        },
    }
}

fn center(o: &Oriented) -> f64 {
    (o.along_lo + o.along_hi) / 2.0
}

/// Whether `first` precedes `second` along the axis.
fn precedes(first: (&Oriented, usize), second: (&Oriented, usize)) -> bool {
    let (a, b) = (center(first.0), center(second.0));
    a < b || (a == b && first.1 < second.1)
}

fn gap(near: &Oriented, far: &Oriented) -> f64 {
    far.along_lo - near.along_hi
}

/// Line-of-sight test between `near` (earlier along the axis) and `far`.
fn sees(boxes: &[Oriented], near: usize, far: usize) -> bool {
    let (n, f) = (&boxes[near], &boxes[far]);
    let (gap_lo, gap_hi) = (n.along_hi, f.along_lo);
    if gap_hi <= gap_lo {
        return true;
    }
    let lo = n.across_lo.max(f.across_lo);
    let hi = n.across_hi.min(f.across_hi);
    let mut blocked: Vec<(f64, f64)> = boxes
        .iter()
        .enumerate()
        .filter(|&(w, b)| {
            w != near
                && w != far
                && b.across_lo < hi
                && b.across_hi > lo
                && b.along_lo < gap_hi
                && b.along_hi > gap_lo
        })
        .map(|(_, b)| (b.across_lo.max(lo), b.across_hi.min(hi)))
        .collect();
    blocked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = lo;
    for (s, e) in blocked {
        if s > reach {
            return true;
        }
        reach = reach.max(e);
    }
    reach < hi
}

/// Undirected visibility edges `(u, v)` with `u < v`, sorted.
pub fn build_visibility_edges(page: &Page) -> Vec<(usize, usize)> {
    let boxes: Vec<BBox> = page.tokens.iter().map(|t| t.bbox).collect();
    visibility_edges_for_boxes(&boxes)
}

pub fn visibility_edges_for_boxes(boxes: &[BBox]) -> Vec<(usize, usize)> {
    let n = boxes.len();
    let mut edges = Vec::new();
    for axis in [Axis::Vertical, Axis::Horizontal] {
        let oriented: Vec<Oriented> = boxes.iter().map(|b| orient(b, axis)).collect();
        for u in 0..n {
            // forward: u is the near box; backward: u is the far box
            let mut forward: Vec<(f64, usize)> = Vec::new();
            let mut backward: Vec<(f64, usize)> = Vec::new();
            for v in 0..n {
                if v == u || relation(&boxes[u], &boxes[v]) != Some(axis) {
                    continue;
                }
                if precedes((&oriented[u], u), (&oriented[v], v)) {
                    forward.push((gap(&oriented[u], &oriented[v]), v));
                } else {
                    backward.push((gap(&oriented[v], &oriented[u]), v));
                }
            }
            for (cands, u_is_near) in [(forward, true), (backward, false)] {
                let mut cands = cands;
                cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let hit = cands.iter().find(|&&(_, v)| {
                    if u_is_near {
                        sees(&oriented, u, v)
                    } else {
                        sees(&oriented, v, u)
                    }
                });
                if let Some(&(_, v)) = hit {
                    edges.push((u.min(v), u.max(v)));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}
