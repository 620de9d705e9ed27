use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::doc_model::{TokenLabel, TokensFile};
use crate::error::{Error, Result};

use super::labels::LabeledPage;

/// Per-token labels of one document, stored next to its tokens file.
/// Predictions additionally carry the winning class probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCorpusFile {
    pub doc_id: String,
    /// Path of the tokens file, relative to this file's directory when not
    /// absolute.
    pub tokens_file: String,
    pub pages: Vec<LabeledCorpusPage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCorpusPage {
    pub page_no: u32,
    pub labels: Vec<TokenLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<f64>>,
}

impl LabeledCorpusFile {
    pub fn from_labeled(doc_id: &str, tokens_file: &str, pages: &[LabeledPage]) -> Self {
        LabeledCorpusFile {
            doc_id: doc_id.to_string(),
            tokens_file: tokens_file.to_string(),
            pages: pages
                .iter()
                .map(|p| LabeledCorpusPage {
                    page_no: p.page.page_no,
                    labels: p.labels.clone(),
                    probabilities: None,
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("labels file serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Tokens file path resolved against the directory of `labels_path`.
    pub fn tokens_path(&self, labels_path: &Path) -> std::path::PathBuf {
        let p = Path::new(&self.tokens_file);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            labels_path.parent().unwrap_or(Path::new(".")).join(p)
        }
    }

    /// Pairs every labeled page with its tokens.
    pub fn join(&self, tokens: &TokensFile) -> Result<Vec<LabeledPage>> {
        self.pages
            .iter()
            .map(|lp| {
                let page = tokens
                    .pages
                    .iter()
                    .find(|p| p.page_no == lp.page_no)
                    .ok_or_else(|| {
                        Error::invalid(format!(
                            "page {} of {} missing from tokens file",
                            lp.page_no, self.doc_id
                        ))
                    })?;
                LabeledPage::new(page.clone(), lp.labels.clone())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::generate_synthetic_pages;

    #[test]
    fn round_trip_and_join() {
        let pages: Vec<LabeledPage> = generate_synthetic_pages(2, 0)
            .into_iter()
            .map(|p| p.labeled)
            .collect();
        let tokens = TokensFile::new("d", pages.iter().map(|p| p.page.clone()).collect());
        let f = LabeledCorpusFile::from_labeled("d", "d.tokens.json", &pages);
        let back = LabeledCorpusFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.join(&tokens).unwrap(), pages);
        assert_eq!(
            f.tokens_path(Path::new("/a/b/labels.json")),
            Path::new("/a/b/d.tokens.json")
        );
    }

    #[test]
    fn bad_label_name_rejected() {
        let s = r#"{"doc_id":"d","tokens_file":"t","pages":[{"page_no":0,"labels":["Row"]}]}"#;
        assert!(LabeledCorpusFile::from_json(s).is_err());
    }

    #[test]
    fn length_mismatch_rejected() {
        let pages: Vec<LabeledPage> = generate_synthetic_pages(1, 0)
            .into_iter()
            .map(|p| p.labeled)
            .collect();
        let tokens = TokensFile::new("d", vec![pages[0].page.clone()]);
        let mut f = LabeledCorpusFile::from_labeled("d", "t", &pages);
        f.pages[0].labels.pop();
        assert!(f.join(&tokens).is_err());
    }
}
