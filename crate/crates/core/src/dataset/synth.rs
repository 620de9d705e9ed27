//! Seeded generator of single-column article pages with one table.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doc_model::{BBox, Page, RegionAnnotation, RegionClass, Token};
use crate::repr_embed::CellTable;

use super::labels::{assign_labels, LabeledPage, DEFAULT_CAPTION_GAP};

pub const PAGE_WIDTH: f64 = 612.0;
pub const PAGE_HEIGHT: f64 = 792.0;

const WORDS: &[&str] = &[
    "the", "of", "and", "model", "results", "we", "table", "data", "method", "proposed",
    "training", "performance", "is", "in", "for", "with", "shows", "layout", "document",
    "graph", "network", "node", "features", "approach", "baseline", "accuracy", "dataset",
    "evaluation", "compared", "using", "our", "on", "this", "are", "each", "pages", "tokens",
    "analysis", "structure", "cells", "detection", "recognition", "experiments", "reported",
    "previous", "work", "improves", "section", "values", "over", "both", "models", "while",
    "learning", "representation", "embedding", "layer", "hidden", "trained", "test",
];

const HEADERS: &[&str] = &[
    "Method", "Acc", "F1", "Recall", "Precision", "Score", "Time", "Params", "Dataset", "Mean",
    "Std", "Error", "Top-1", "BLEU", "Loss", "Size", "Cost", "Gain", "Rate",
];

const ROW_STEMS: &[&str] = &["A", "B", "M", "Net", "Run", "Exp", "v", "R", "Set", "Model"];

const GROUPS: &[&str] = &["Group", "Setting", "Block", "Split", "Part", "Stage"];

/// One generated page with its ground truth and the table's cell grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPage {
    pub labeled: LabeledPage,
    pub regions: Vec<RegionAnnotation>,
    pub table: CellTable,
}

impl SyntheticPage {
    pub fn page(&self) -> &Page {
        &self.labeled.page
    }
}

struct Builder {
    rng: ChaCha8Rng,
    page_no: u32,
    tokens: Vec<Token>,
    regions: Vec<RegionAnnotation>,
    next_block: i64,
    left: f64,
    right: f64,
    y: f64,
}

fn word_width(text: &str, size: f64) -> f64 {
    text.chars().count() as f64 * size * 0.5
}

impl Builder {
    fn block(&mut self) -> i64 {
        self.next_block += 1;
        self.next_block - 1
    }

    fn push_word(&mut self, text: &str, x: f64, y: f64, size: f64, block: i64) -> BBox {
        let b = BBox::new(x, y, x + word_width(text, size), y + size);
        let id = self.tokens.len() as u32;
        self.tokens.push(Token::word(id, text, b, block));
        b
    }

    fn region(&mut self, class: RegionClass, b: BBox) {
        self.regions.push(RegionAnnotation::new(self.page_no, class, b));
    }

    fn random_words(&mut self, n: usize) -> Vec<String> {
        (0..n)
            .map(|_| WORDS.choose(&mut self.rng).expect("non-empty").to_string())
            .collect()
    }

    /// Running text, with the occasional number, year or citation.
    fn prose(&mut self, n: usize) -> Vec<String> {
        (0..n)
            .map(|_| {
                if self.rng.gen_bool(0.08) {
                    let r = &mut self.rng;
                    match r.gen_range(0..5) {
                        0 => format!("{:.1}", r.gen_range(0.0..100.0)),
                        1 => format!("{}", r.gen_range(1990..2024)),
                        2 => format!("[{}]", r.gen_range(1..40)),
                        3 => format!("{}%", r.gen_range(1..100)),
                        _ => format!("({})", r.gen_range(1..9)),
                    }
                } else {
                    WORDS.choose(&mut self.rng).expect("non-empty").to_string()
                }
            })
            .collect()
    }

    /// Flows words left to right between `left` and `right`, returning the
    /// union box of the placed tokens.
    fn flow(&mut self, words: &[String], left: f64, right: f64, size: f64, block: i64) -> BBox {
        let line = size * 1.3;
        let space = size * 0.3;
        let mut x = left;
        let mut union: Option<BBox> = None;
        for w in words {
            let width = word_width(w, size);
            if x > left && x + width > right {
                x = left;
                self.y += line;
            }
            let b = self.push_word(w, x, self.y, size, block);
            union = Some(union.map_or(b, |u| u.union(&b)));
            x += width + space;
        }
        self.y += line;
        union.expect("at least one word")
    }

    fn title(&mut self) {
        let size = self.rng.gen_range(15.0..19.0);
        let n = self.rng.gen_range(3..7);
        let words: Vec<String> = self
            .random_words(n)
            .into_iter()
            .map(|w| {
                let mut c = w.chars();
                let first = c.next().expect("non-empty").to_uppercase();
                first.chain(c).collect()
            })
            .collect();
        let block = self.block();
        let (left, right) = (self.left, self.right);
        let b = self.flow(&words, left, right, size, block);
        self.region(RegionClass::Title, b);
        self.y += 12.0;
    }

    fn paragraph(&mut self, size: f64) {
        let lines = self.rng.gen_range(3..6);
        let n = lines * 9 + self.rng.gen_range(0..6);
        let words = self.prose(n);
        let block = self.block();
        let (left, right) = (self.left, self.right);
        let b = self.flow(&words, left, right, size, block);
        self.region(RegionClass::Text, b);
        self.y += 10.0;
    }

    fn list(&mut self, size: f64) {
        let items = self.rng.gen_range(2..5);
        let mut union: Option<BBox> = None;
        for _ in 0..items {
            let block = self.block();
            let bullet = self.push_word("•", self.left + 10.0, self.y, size, block);
            let n = self.rng.gen_range(3..8);
            let words = self.random_words(n);
            let (left, right) = (self.left + 22.0, self.right);
            let b = self.flow(&words, left, right, size, block).union(&bullet);
            union = Some(union.map_or(b, |u| u.union(&b)));
        }
        self.region(RegionClass::List, union.expect("at least one item"));
        self.y += 10.0;
    }

    /// Caption under a region ending at `region_bottom`; whatever follows
    /// starts beyond the caption search gap.
    fn caption(&mut self, prefix: &str, region_bottom: f64, left: f64, right: f64, size: f64) {
        let mut words = vec![prefix.to_string(), format!("{}:", self.rng.gen_range(1..10))];
        let n = self.rng.gen_range(4..12);
        words.extend(self.random_words(n));
        let block = self.block();
        let b = self.flow(&words, left, right, size, block);
        self.region(RegionClass::Caption, b);
        self.y = (self.y + 12.0).max(region_bottom + DEFAULT_CAPTION_GAP + 4.0);
    }

    fn image(&mut self, size: f64) {
        let w = self.rng.gen_range(150.0..300.0);
        let h = self.rng.gen_range(70.0..130.0);
        let x = self.rng.gen_range(self.left..(self.right - w));
        let b = BBox::new(x, self.y, x + w, self.y + h);
        let block = self.block();
        let id = self.tokens.len() as u32;
        self.tokens.push(Token::image(id, b, block));
        self.region(RegionClass::Image, b);
        self.y += h + 6.0;
        self.caption("Figure", b.y2, x, x + w, size);
    }

    fn numeric_cell(&mut self) -> String {
        let r = &mut self.rng;
        let v: f64 = r.gen_range(0.0..100.0);
        match r.gen_range(0..16) {
            0 => format!("{v:.1}"),
            1 => format!("{:.2}", v / 100.0),
            2 => format!("±{:.1}", v / 10.0),
            3 => format!("{}%", v.round()),
            4 => format!("({:.1})", v / 10.0),
            5 => format!("{},{:03}", r.gen_range(1..10), r.gen_range(0..1000)),
            6 => format!("{:.1}±{:.1}", v, v / 20.0),
            7 => format!("-{:.2}", v / 100.0),
            8 => format!("{:.1}e-{}", v / 10.0, r.gen_range(2..6)),
            9 => format!("${}", v.round()),
            10 => format!("{}/{}", r.gen_range(1..50), r.gen_range(50..100)),
            11 => format!("{:.1}M", v),
            12 => format!("<{:.2}", v / 1000.0),
            13 => format!("{v:.1}*"),
            14 => format!("{}:{}", r.gen_range(1..10), r.gen_range(1..10)),
            _ => format!("{}", v.round()),
        }
    }

    fn table(&mut self, size: f64) -> CellTable {
        let n_cols = self.rng.gen_range(3..7);
        let n_body = self.rng.gen_range(3..9);
        let projected_at = self
            .rng
            .gen_bool(0.5)
            .then(|| self.rng.gen_range(0..n_body));

        let mut headers: Vec<&str> = HEADERS.to_vec();
        headers.shuffle(&mut self.rng);
        let mut grid: Vec<Vec<String>> = vec![std::iter::once(String::new())
            .chain(headers[..n_cols - 1].iter().map(|s| s.to_string()))
            .collect()];
        let mut projected_rows = Vec::new();
        for r in 0..n_body {
            if projected_at == Some(r) {
                let g = GROUPS.choose(&mut self.rng).expect("non-empty");
                let label = format!("{g} {}", (b'A' + self.rng.gen_range(0..6)) as char);
                projected_rows.push(grid.len());
                grid.push(
                    std::iter::once(label)
                        .chain((1..n_cols).map(|_| String::new()))
                        .collect(),
                );
            }
            let stem = ROW_STEMS.choose(&mut self.rng).expect("non-empty");
            let mut row = vec![format!("{stem}{}", self.rng.gen_range(1..20))];
            for _ in 1..n_cols {
                row.push(self.numeric_cell());
            }
            grid.push(row);
        }

        let widths: Vec<f64> = (0..n_cols)
            .map(|j| {
                let longest = grid
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| j > 0 || !projected_rows.contains(i))
                    .map(|(_, r)| word_width(&r[j], size))
                    .fold(0.0, f64::max);
                longest.min(90.0) + self.rng.gen_range(12.0..24.0)
            })
            .collect();
        let col_width = |j: usize| widths[j];
        let total: f64 = widths.iter().sum();
        let x0 = self.left + self.rng.gen_range(0.0..(self.right - self.left - total).max(1.0));
        let row_h = size + 6.0;
        let top = self.y;
        let mut col_x = vec![x0];
        for j in 0..n_cols {
            col_x.push(col_x[j] + col_width(j));
        }
        let table_box = BBox::new(x0, top, col_x[n_cols], top + row_h * grid.len() as f64);
        self.region(RegionClass::Table, table_box);
        for j in 0..n_cols {
            self.region(
                RegionClass::Column,
                BBox::new(col_x[j], table_box.y1, col_x[j + 1], table_box.y2),
            );
        }
        for (i, row) in grid.iter().enumerate() {
            let y = top + row_h * i as f64;
            let row_box = BBox::new(x0, y, col_x[n_cols], y + row_h);
            self.region(RegionClass::Row, row_box);
            if i == 0 {
                self.region(RegionClass::TableHeader, row_box);
            }
            if projected_rows.contains(&i) {
                self.region(RegionClass::ProjectedHeader, row_box);
            }
            for (j, cell) in row.iter().enumerate() {
                let cell_box = BBox::new(col_x[j], y, col_x[j + 1], y + row_h);
                self.region(RegionClass::GridCell, cell_box);
                if cell.is_empty() {
                    continue;
                }
                self.region(RegionClass::TableCell, cell_box);
                let block = self.block();
                let mut x = col_x[j] + 3.0;
                for w in cell.split(' ') {
                    let b = self.push_word(w, x, y + 3.0, size, block);
                    x = b.x2 + size * 0.3;
                }
            }
        }
        self.y = table_box.y2 + 6.0;
        self.caption("Table", table_box.y2, x0, col_x[n_cols].max(x0 + 200.0).min(self.right), size);
        CellTable::new(grid).expect("rows have equal length")
    }

    fn page_number(&mut self, size: f64) {
        let text = format!("{}", self.page_no + 1);
        let w = word_width(&text, size);
        let y = PAGE_HEIGHT - 40.0;
        let block = self.block();
        let b = self.push_word(&text, (PAGE_WIDTH - w) / 2.0, y, size, block);
        self.region(RegionClass::Other, b);
    }
}

/// Generates `n` pages deterministically from `seed`. Page `i` has
/// `page_no = i`.
pub fn generate_synthetic_pages(n: usize, seed: u64) -> Vec<SyntheticPage> {
    (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            generate_page(i as u32, rng)
        })
        .collect()
}

fn generate_page(page_no: u32, rng: ChaCha8Rng) -> SyntheticPage {
    let mut b = Builder {
        rng,
        page_no,
        tokens: Vec::new(),
        regions: Vec::new(),
        next_block: 0,
        left: 0.0,
        right: 0.0,
        y: 0.0,
    };
    let margin = b.rng.gen_range(55.0..80.0);
    b.left = margin;
    b.right = PAGE_WIDTH - margin;
    b.y = b.rng.gen_range(45.0..70.0);
    let size = b.rng.gen_range(8.5..10.5);

    b.title();
    b.paragraph(size);
    if b.rng.gen_bool(0.35) {
        b.list(size);
    }
    if b.rng.gen_bool(0.3) {
        b.image(size);
    }
    b.y += 6.0;
    let table = b.table(size);
    if b.rng.gen_bool(0.5) {
        b.paragraph(size);
    }
    b.page_number(size);

    let page = Page {
        page_no,
        width: PAGE_WIDTH,
        height: PAGE_HEIGHT,
        tokens: b.tokens,
    };
    let labeled = assign_labels(&page, &b.regions);
    SyntheticPage {
        labeled,
        regions: b.regions,
        table,
    }
}
