use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::doc_model::{BBox, Page, RegionAnnotation, RegionClass, TokenLabel};
use crate::error::{Error, Result};

/// Minimum share of a token's area a region must cover to claim it.
pub const OVERLAP_THRESHOLD: f64 = 0.5;
/// Largest vertical gap, in points, between a caption block and its region.
pub const DEFAULT_CAPTION_GAP: f64 = 30.0;

/// A page with one ground-truth label per token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPage {
    pub page: Page,
    pub labels: Vec<TokenLabel>,
}

impl LabeledPage {
    pub fn new(page: Page, labels: Vec<TokenLabel>) -> Result<Self> {
        if page.tokens.len() != labels.len() {
            return Err(Error::invalid(format!(
                "page {}: {} labels for {} tokens",
                page.page_no,
                labels.len(),
                page.tokens.len()
            )));
        }
        Ok(LabeledPage { page, labels })
    }

    pub fn has_table(&self) -> bool {
        self.labels.iter().any(|l| l.is_table())
    }
}

/// Share of `token` covered by `region`. Degenerate (zero-area) tokens count
/// as fully covered when their center lies in the region.
pub fn overlap_ratio(token: &BBox, region: &BBox) -> f64 {
    let area = token.area();
    if area > 0.0 {
        return token.intersection_area(region) / area;
    }
    let (cx, cy) = token.center();
    let inside = cx >= region.x1 && cx <= region.x2 && cy >= region.y1 && cy <= region.y2;
    if inside {
        1.0
    } else {
        0.0
    }
}

/// Labels every token from the regions covering at least half of it,
/// preferring the highest-priority label. Image tokens are always `Image`;
/// uncovered tokens are `Other`. Regions of other pages are ignored.
pub fn assign_labels(page: &Page, regions: &[RegionAnnotation]) -> LabeledPage {
    let relevant: Vec<(&RegionAnnotation, TokenLabel)> = regions
        .iter()
        .filter(|r| r.page_no == page.page_no)
        .filter_map(|r| r.region_class.token_label().map(|l| (r, l)))
        .collect();
    let labels = page
        .tokens
        .iter()
        .map(|t| {
            if t.is_image {
                return TokenLabel::Image;
            }
            relevant
                .iter()
                .filter(|(r, _)| overlap_ratio(&t.bbox, &r.bbox) >= OVERLAP_THRESHOLD)
                .map(|&(_, l)| l)
                .min_by_key(|l| l.priority_rank())
                .unwrap_or(TokenLabel::Other)
        })
        .collect();
    LabeledPage {
        page: page.clone(),
        labels,
    }
}

/// Union box of every block, keyed by block id.
pub fn block_boxes(page: &Page) -> BTreeMap<i64, BBox> {
    let mut out: BTreeMap<i64, BBox> = BTreeMap::new();
    for t in &page.tokens {
        out.entry(t.block_id)
            .and_modify(|b| *b = b.union(&t.bbox))
            .or_insert(t.bbox);
    }
    out
}

fn horizontal_share(block: &BBox, region: &BBox) -> f64 {
    let w = block.width();
    if w > 0.0 {
        block.x_overlap(region) / w
    } else if block.x1 >= region.x1 && block.x1 <= region.x2 {
        1.0
    } else {
        0.0
    }
}

/// Relabels Text blocks that sit just below a table or image region (within
/// `max_gap` points, overlapping at least half of the block's width) as
/// `Caption`. A region with no such block below it takes qualifying blocks
/// above it instead; blocks already labeled `Caption` count as found.
pub fn caption_heuristic(
    labeled: &LabeledPage,
    regions: &[RegionAnnotation],
    max_gap: f64,
) -> LabeledPage {
    let page = &labeled.page;
    let blocks = block_boxes(page);
    let text_blocks: Vec<(i64, BBox)> = blocks
        .iter()
        .filter(|(id, _)| {
            page.tokens.iter().zip(&labeled.labels).any(|(t, &l)| {
                t.block_id == **id && matches!(l, TokenLabel::Text | TokenLabel::Caption)
            })
        })
        .map(|(&id, &b)| (id, b))
        .collect();

    let mut captions: Vec<i64> = Vec::new();
    for r in regions.iter().filter(|r| {
        r.page_no == page.page_no
            && matches!(r.region_class, RegionClass::Table | RegionClass::Image)
    }) {
        let qualifies = |b: &BBox, gap: f64| {
            (0.0..=max_gap).contains(&gap) && horizontal_share(b, &r.bbox) >= 0.5
        };
        let below: Vec<i64> = text_blocks
            .iter()
            .filter(|(_, b)| qualifies(b, b.y1 - r.bbox.y2))
            .map(|&(id, _)| id)
            .collect();
        if below.is_empty() {
            captions.extend(
                text_blocks
                    .iter()
                    .filter(|(_, b)| qualifies(b, r.bbox.y1 - b.y2))
                    .map(|&(id, _)| id),
            );
        } else {
            captions.extend(below);
        }
    }

    let labels = page
        .tokens
        .iter()
        .zip(&labeled.labels)
        .map(|(t, &l)| {
            if l == TokenLabel::Text && captions.contains(&t.block_id) {
                TokenLabel::Caption
            } else {
                l
            }
        })
        .collect();
    LabeledPage {
        page: page.clone(),
        labels,
    }
}
