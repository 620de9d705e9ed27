use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::doc_model::TokenLabel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub per_class: BTreeMap<TokenLabel, ClassMetrics>,
    /// `confusion[gold][predicted]`, in class-index order.
    pub confusion: Vec<Vec<u64>>,
    pub total: u64,
    /// Mean F1 over classes present in gold or predictions.
    pub macro_f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compute_metrics(gold: &[TokenLabel], predicted: &[TokenLabel]) -> Result<MetricsReport> {
    if gold.len() != predicted.len() {
        return Err(Error::invalid(format!(
            "{} gold labels but {} predictions",
            gold.len(),
            predicted.len()
        )));
    }
    if gold.is_empty() {
        return Err(Error::invalid("no labels to evaluate"));
    }
    let k = TokenLabel::COUNT;
    let mut confusion = vec![vec![0u64; k]; k];
    for (g, p) in gold.iter().zip(predicted) {
        confusion[g.index()][p.index()] += 1;
    }
    let total = gold.len() as u64;
    let trace: u64 = (0..k).map(|i| confusion[i][i]).sum();
    let mut per_class = BTreeMap::new();
    let mut present = Vec::new();
    for l in TokenLabel::ALL {
        let c = l.index();
        let tp = confusion[c][c];
        let support: u64 = confusion[c].iter().sum();
        let predicted: u64 = confusion.iter().map(|row| row[c]).sum();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        if support + predicted > 0 {
            present.push(f1);
        }
        per_class.insert(
            l,
            ClassMetrics {
                precision,
                recall,
                f1,
                support,
            },
        );
    }
    Ok(MetricsReport {
        accuracy: ratio(trace, total),
        per_class,
        confusion,
        total,
        macro_f1: present.iter().sum::<f64>() / present.len() as f64,
    })
}

impl MetricsReport {
    pub fn f1(&self, label: TokenLabel) -> f64 {
        self.per_class[&label].f1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary with cell and header F1 first.
    pub fn text_report(&self) -> String {
        let mut s = String::new();
        writeln!(s, "tokens      {}", self.total).unwrap();
        writeln!(s, "accuracy    {:.4}", self.accuracy).unwrap();
        writeln!(s, "cell F1     {:.4}", self.f1(TokenLabel::TableCell)).unwrap();
        writeln!(s, "cell-h F1   {:.4}", self.f1(TokenLabel::TableHeader)).unwrap();
        writeln!(s, "macro F1    {:.4}", self.macro_f1).unwrap();
        writeln!(s).unwrap();
        writeln!(s, "{:<22}{:>10}{:>10}{:>10}{:>10}", "class", "precision", "recall", "f1", "support")
            .unwrap();
        for l in TokenLabel::ALL {
            let m = &self.per_class[&l];
            writeln!(
                s,
                "{:<22}{:>10.4}{:>10.4}{:>10.4}{:>10}",
                l.as_str(),
                m.precision,
                m.recall,
                m.f1,
                m.support
            )
            .unwrap();
        }
        s
    }
}
