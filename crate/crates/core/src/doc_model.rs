//! Core document types: boxes, tokens, pages, labels and region annotations.
//!
//! Coordinates are PDF points with the origin at the top-left corner and `y`
//! growing downward, so "above" means a smaller `y`.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Current version of the tokens file format.
pub const TOKENS_FORMAT_VERSION: u32 = 1;

/// Slack allowed when checking that a token lies on its page.
pub const PAGE_EDGE_TOLERANCE: f64 = 1.0;

/// Axis-aligned box `[x1, y1, x2, y2]`, serialized as a four-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct BBox {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl From<[f64; 4]> for BBox {
    fn from(v: [f64; 4]) -> Self {
        BBox::new(v[0], v[1], v[2], v[3])
    }
}

impl From<BBox> for [f64; 4] {
    fn from(b: BBox) -> Self {
        [b.x1, b.y1, b.x2, b.y2]
    }
}

impl BBox {
    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        BBox { x1, y1, x2, y2 }
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)
    }

    /// Length of the shared part of the two horizontal projections.
    /// Negative when the projections are disjoint.
    pub fn x_overlap(&self, other: &BBox) -> f64 {
        self.x2.min(other.x2) - self.x1.max(other.x1)
    }

    /// Length of the shared part of the two vertical projections.
    pub fn y_overlap(&self, other: &BBox) -> f64 {
        self.y2.min(other.y2) - self.y1.max(other.y1)
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        self.x_overlap(other).max(0.0) * self.y_overlap(other).max(0.0)
    }

    pub fn union(&self, other: &BBox) -> BBox {
        BBox::new(
            self.x1.min(other.x1),
            self.y1.min(other.y1),
            self.x2.max(other.x2),
            self.y2.max(other.y2),
        )
    }

    /// Whether `self` lies inside `other` (closed boxes).
    pub fn within(&self, other: &BBox) -> bool {
        self.x1 >= other.x1 && self.y1 >= other.y1 && self.x2 <= other.x2 && self.y2 <= other.y2
    }

    fn is_finite(&self) -> bool {
        [self.x1, self.y1, self.x2, self.y2].iter().all(|v| v.is_finite())
    }
}

/// One word-level object extracted from a page.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    pub id: u32,
    pub text: String,
    pub bbox: BBox,
    pub block_id: i64,
    pub is_image: bool,
    /// Precomputed word-embedding vector supplied by the producer of the file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_embedding: Option<Vec<f32>>,
}

impl Token {
    pub fn word(id: u32, text: impl Into<String>, bbox: BBox, block_id: i64) -> Self {
        Token {
            id,
            text: text.into(),
            bbox,
            block_id,
            is_image: false,
            ext_embedding: None,
        }
    }

    pub fn image(id: u32, bbox: BBox, block_id: i64) -> Self {
        Token {
            id,
            text: String::new(),
            bbox,
            block_id,
            is_image: true,
            ext_embedding: None,
        }
    }
}

/// Token classes predicted by the classifier, in class-index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TokenLabel {
    Text,
    Title,
    List,
    Caption,
    TableCell,
    TableHeader,
    TableProjectedHeader,
    Image,
    Other,
}

impl TokenLabel {
    pub const COUNT: usize = 9;

    pub const ALL: [TokenLabel; TokenLabel::COUNT] = [
        TokenLabel::Text,
        TokenLabel::Title,
        TokenLabel::List,
        TokenLabel::Caption,
        TokenLabel::TableCell,
        TokenLabel::TableHeader,
        TokenLabel::TableProjectedHeader,
        TokenLabel::Image,
        TokenLabel::Other,
    ];

    /// Labels ordered from strongest to weakest claim on a token. Used both
    /// when a token falls inside several regions and to break voting ties.
    pub const PRIORITY: [TokenLabel; TokenLabel::COUNT] = [
        TokenLabel::TableProjectedHeader,
        TokenLabel::TableHeader,
        TokenLabel::TableCell,
        TokenLabel::Caption,
        TokenLabel::Title,
        TokenLabel::List,
        TokenLabel::Text,
        TokenLabel::Image,
        TokenLabel::Other,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<TokenLabel> {
        TokenLabel::ALL.get(i).copied()
    }

    /// Position in [`TokenLabel::PRIORITY`]; lower ranks win.
    pub fn priority_rank(self) -> usize {
        TokenLabel::PRIORITY
            .iter()
            .position(|&l| l == self)
            .expect("every label has a priority")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TokenLabel::Text => "Text",
            TokenLabel::Title => "Title",
            TokenLabel::List => "List",
            TokenLabel::Caption => "Caption",
            TokenLabel::TableCell => "TableCell",
            TokenLabel::TableHeader => "TableHeader",
            TokenLabel::TableProjectedHeader => "TableProjectedHeader",
            TokenLabel::Image => "Image",
            TokenLabel::Other => "Other",
        }
    }

    pub fn is_table(self) -> bool {
        matches!(
            self,
            TokenLabel::TableCell | TokenLabel::TableHeader | TokenLabel::TableProjectedHeader
        )
    }
}

impl fmt::Display for TokenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TokenLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TokenLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// The thirteen annotated region classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionClass {
    Title,
    Text,
    List,
    Table,
    Image,
    Row,
    Column,
    TableHeader,
    ProjectedHeader,
    TableCell,
    GridCell,
    Caption,
    Other,
}

impl RegionClass {
    pub const ALL: [RegionClass; 13] = [
        RegionClass::Title,
        RegionClass::Text,
        RegionClass::List,
        RegionClass::Table,
        RegionClass::Image,
        RegionClass::Row,
        RegionClass::Column,
        RegionClass::TableHeader,
        RegionClass::ProjectedHeader,
        RegionClass::TableCell,
        RegionClass::GridCell,
        RegionClass::Caption,
        RegionClass::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionClass::Title => "title",
            RegionClass::Text => "text",
            RegionClass::List => "list",
            RegionClass::Table => "table",
            RegionClass::Image => "image",
            RegionClass::Row => "row",
            RegionClass::Column => "column",
            RegionClass::TableHeader => "table_header",
            RegionClass::ProjectedHeader => "projected_header",
            RegionClass::TableCell => "table_cell",
            RegionClass::GridCell => "grid_cell",
            RegionClass::Caption => "caption",
            RegionClass::Other => "other",
        }
    }

    /// Token label carried by tokens inside this region, if any.
    /// Structural regions (table, row, column, grid cell) and `other`
    /// do not label tokens.
    pub fn token_label(self) -> Option<TokenLabel> {
        match self {
            RegionClass::Title => Some(TokenLabel::Title),
            RegionClass::Text => Some(TokenLabel::Text),
            RegionClass::List => Some(TokenLabel::List),
            RegionClass::Image => Some(TokenLabel::Image),
            RegionClass::TableHeader => Some(TokenLabel::TableHeader),
            RegionClass::ProjectedHeader => Some(TokenLabel::TableProjectedHeader),
            RegionClass::TableCell => Some(TokenLabel::TableCell),
            RegionClass::Caption => Some(TokenLabel::Caption),
            RegionClass::Table
            | RegionClass::Row
            | RegionClass::Column
            | RegionClass::GridCell
            | RegionClass::Other => None,
        }
    }
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionClass::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownRegionClass(s.to_string()))
    }
}

impl Serialize for RegionClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RegionClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionAnnotation {
    pub page_no: u32,
    #[serde(rename = "class")]
    pub region_class: RegionClass,
    pub bbox: BBox,
}

impl RegionAnnotation {
    pub fn new(page_no: u32, region_class: RegionClass, bbox: BBox) -> Self {
        RegionAnnotation {
            page_no,
            region_class,
            bbox,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Page {
    pub page_no: u32,
    pub width: f64,
    pub height: f64,
    pub tokens: Vec<Token>,
}

/// A broken page invariant. `token_id` is `None` for page-level problems.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub token_id: Option<u32>,
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.token_id {
            Some(id) => write!(f, "token {id}: {} ({})", self.rule, self.detail),
            None => write!(f, "page: {} ({})", self.rule, self.detail),
        }
    }
}

/// Checks every page and token invariant, collecting all violations.
pub fn validate_page(page: &Page) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut page_violation = |rule, detail: String| {
        out.push(Violation {
            token_id: None,
            rule,
            detail,
        })
    };
    if !(page.width.is_finite() && page.width > 0.0) {
        page_violation("positive-width", format!("width = {}", page.width));
    }
    if !(page.height.is_finite() && page.height > 0.0) {
        page_violation("positive-height", format!("height = {}", page.height));
    }

    let tol = PAGE_EDGE_TOLERANCE;
    for (pos, tok) in page.tokens.iter().enumerate() {
        let mut v = |rule, detail: String| {
            out.push(Violation {
                token_id: Some(tok.id),
                rule,
                detail,
            })
        };
        if tok.id as usize != pos {
            v("contiguous-ids", format!("id {} at position {pos}", tok.id));
        }
        if tok.text.is_empty() && !tok.is_image {
            v("non-empty-text", "empty text on a non-image token".into());
        }
        if tok.text.contains(['\n', '\r']) {
            v("no-newlines", format!("{:?}", tok.text));
        }
        let b = &tok.bbox;
        if !b.is_finite() {
            v("finite-coordinates", format!("{:?}", b));
            continue;
        }
        if b.x1 < 0.0 || b.y1 < 0.0 || b.x2 < 0.0 || b.y2 < 0.0 {
            v("non-negative-coordinates", format!("{:?}", b));
        }
        if b.x1 > b.x2 {
            v("x1<=x2", format!("x1 = {} > x2 = {}", b.x1, b.x2));
        }
        if b.y1 > b.y2 {
            v("y1<=y2", format!("y1 = {} > y2 = {}", b.y1, b.y2));
        }
        if b.x2 > page.width + tol || b.y2 > page.height + tol || b.x1 < -tol || b.y1 < -tol {
            v(
                "within-page",
                format!("{:?} outside {}x{}", b, page.width, page.height),
            );
        }
    }
    out
}

/// Serialized form of one document's token dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokensFile {
    pub format_version: u32,
    pub doc_id: String,
    pub pages: Vec<Page>,
}

impl TokensFile {
    pub fn new(doc_id: impl Into<String>, pages: Vec<Page>) -> Self {
        TokensFile {
            format_version: TOKENS_FORMAT_VERSION,
            doc_id: doc_id.into(),
            pages,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: TokensFile = serde_json::from_str(s)?;
        if f.format_version != TOKENS_FORMAT_VERSION {
            return Err(Error::Version {
                what: "tokens",
                found: f.format_version,
                expected: TOKENS_FORMAT_VERSION,
            });
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tokens file serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Region annotations for one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationFile {
    pub doc_id: String,
    pub regions: Vec<RegionAnnotation>,
}

impl AnnotationFile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("annotation file serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn regions_for(&self, page_no: u32) -> Vec<RegionAnnotation> {
        self.regions
            .iter()
            .filter(|r| r.page_no == page_no)
            .cloned()
            .collect()
    }
}
