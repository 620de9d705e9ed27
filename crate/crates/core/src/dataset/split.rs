use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::labels::LabeledPage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: f64,
    pub val: f64,
    pub test: f64,
    pub seed: u64,
    /// Move pages without any table token out of the training split.
    pub drop_tableless_train: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train: 0.9,
            val: 0.05,
            test: 0.05,
            seed: 0,
            drop_tableless_train: true,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        let f = [self.train, self.val, self.test];
        if f.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::invalid(format!("split fractions must be positive: {f:?}")));
        }
        let sum: f64 = f.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("split fractions sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// Disjoint parts of a corpus. `dropped` holds tableless pages removed from
/// the training part, so the four lists together are the input.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusSplit {
    pub train: Vec<LabeledPage>,
    pub val: Vec<LabeledPage>,
    pub test: Vec<LabeledPage>,
    pub dropped: Vec<LabeledPage>,
}

/// Sizes for `n` items: rounded fractions, every part at least one item.
pub fn split_sizes(n: usize, spec: &SplitSpec) -> Result<[usize; 3]> {
    spec.validate()?;
    if n < 3 {
        return Err(Error::invalid(format!("{n} pages cannot fill three splits")));
    }
    let mut val = ((n as f64 * spec.val).round() as usize).max(1);
    let mut test = ((n as f64 * spec.test).round() as usize).max(1);
    while val + test > n - 1 {
        if val >= test {
            val -= 1;
        } else {
            test -= 1;
        }
    }
    Ok([n - val - test, val, test])
}

/// Deterministic shuffled split.
pub fn split_corpus(pages: Vec<LabeledPage>, spec: &SplitSpec) -> Result<CorpusSplit> {
    let [n_train, n_val, _] = split_sizes(pages.len(), spec)?;
    let mut order: Vec<usize> = (0..pages.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
    let mut slots: Vec<Option<LabeledPage>> = pages.into_iter().map(Some).collect();
    let mut take = |idx: &[usize]| -> Vec<LabeledPage> {
        idx.iter().map(|&i| slots[i].take().expect("each index once")).collect()
    };
    let train_all = take(&order[..n_train]);
    let val = take(&order[n_train..n_train + n_val]);
    let test = take(&order[n_train + n_val..]);

    let (train, dropped): (Vec<_>, Vec<_>) = if spec.drop_tableless_train {
        train_all.into_iter().partition(LabeledPage::has_table)
    } else {
        (train_all, Vec::new())
    };
    if train.is_empty() {
        log::warn!("training split is empty after dropping tableless pages");
    }
    Ok(CorpusSplit {
        train,
        val,
        test,
        dropped,
    })
}
