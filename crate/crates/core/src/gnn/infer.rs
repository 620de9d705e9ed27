use crate::doc_model::TokenLabel;
use crate::error::Result;
use crate::graph_builder::PageGraph;

use super::model::GnnModel;

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Most probable label of every node with its probability.
pub fn infer(model: &GnnModel, graph: &PageGraph) -> Result<Vec<(TokenLabel, f64)>> {
    let p = model.predict_proba(graph)?;
    Ok(p.rows()
        .into_iter()
        .map(|row| {
            let row = row.to_vec();
            let c = argmax(&row);
            let label = TokenLabel::from_index(c).unwrap_or(TokenLabel::Other);
            (label, row[c])
        })
        .collect())
}
