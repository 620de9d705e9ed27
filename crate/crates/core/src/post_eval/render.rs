use std::fmt::Write;

use crate::doc_model::{BBox, Page, TokenLabel};

use super::blocks::BlockPrediction;

/// Fill color of a token label.
pub fn label_color(label: TokenLabel) -> &'static str {
    match label {
        TokenLabel::Text => "#e53935",
        TokenLabel::Title => "#43a047",
        TokenLabel::List => "#1a237e",
        TokenLabel::Caption => "#81d4fa",
        TokenLabel::TableCell => "#f48fb1",
        TokenLabel::TableHeader => "#fb8c00",
        TokenLabel::TableProjectedHeader => "#8e24aa",
        TokenLabel::Image => "#6d4c41",
        TokenLabel::Other => "#9e9e9e",
    }
}

/// Color of whole table blocks in block overlays.
pub const TABLE_BLOCK_COLOR: &str = "#fdd835";

fn header(page: &Page) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = page.width,
        h = page.height
    )
    .unwrap();
    writeln!(
        s,
        r##"<rect x="0" y="0" width="{:.2}" height="{:.2}" fill="#ffffff" stroke="#000000" stroke-width="1"/>"##,
        page.width, page.height
    )
    .unwrap();
    s
}

fn rect(s: &mut String, b: &BBox, color: &str, title: &str) {
    writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.5" stroke="{color}" stroke-width="0.5"><title>{}</title></rect>"#,
        b.x1,
        b.y1,
        b.width(),
        b.height(),
        escape(title)
    )
    .unwrap();
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One rectangle per token, filled by its label.
pub fn render_tokens(page: &Page, labels: &[TokenLabel]) -> String {
    let mut s = header(page);
    for (t, l) in page.tokens.iter().zip(labels) {
        rect(&mut s, &t.bbox, label_color(*l), &format!("{} {}", l, t.text));
    }
    s.push_str("</svg>\n");
    s
}

/// One rectangle per block; table-cell blocks use the table-block color.
pub fn render_blocks(page: &Page, blocks: &[BlockPrediction]) -> String {
    let mut s = header(page);
    for b in blocks {
        let color = match b.label {
            TokenLabel::TableCell => TABLE_BLOCK_COLOR,
            l => label_color(l),
        };
        rect(&mut s, &b.bbox, color, &format!("block {} {} ({:.2})", b.block_id, b.label, b.vote));
    }
    s.push_str("</svg>\n");
    s
}
