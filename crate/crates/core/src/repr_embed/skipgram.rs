//! Skip-gram with negative sampling over prototype ids.

use ndarray::{Array1, Array2, ArrayView1};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkipGramConfig {
    pub dim: usize,
    pub epochs: usize,
    pub negatives: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for SkipGramConfig {
    fn default() -> Self {
        SkipGramConfig {
            dim: 80,
            epochs: 20,
            negatives: 5,
            learning_rate: 0.025,
            seed: 0,
        }
    }
}

/// A target id with the ids of its context cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingWindow {
    pub target: usize,
    pub contexts: Vec<usize>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Loss and gradients for one (target, context, negatives) example.
#[derive(Debug, Clone)]
pub struct SgnsGrad {
    pub loss: f64,
    pub target: Array1<f64>,
    pub context: Array1<f64>,
    pub negatives: Vec<Array1<f64>>,
}

/// `-ln σ(c·t) - Σ ln σ(-n_k·t)` and its gradient with respect to each vector.
pub fn sgns_loss(
    target: ArrayView1<f64>,
    context: ArrayView1<f64>,
    negatives: &[ArrayView1<f64>],
) -> SgnsGrad {
    let pos = sigmoid(context.dot(&target));
    let mut loss = -pos.ln();
    // d/dz of -ln σ(z) is σ(z) - 1
    let g_pos = pos - 1.0;
    let mut grad_t = &context * g_pos;
    let grad_c = &target * g_pos;
    let mut grad_n = Vec::with_capacity(negatives.len());
    for n in negatives {
        let s = sigmoid(n.dot(&target));
        loss -= (1.0 - s).ln();
        // d/dz of -ln σ(-z) is σ(z)
        grad_t.scaled_add(s, n);
        grad_n.push(&target * s);
    }
    SgnsGrad {
        loss,
        target: grad_t,
        context: grad_c,
        negatives: grad_n,
    }
}

#[derive(Debug, Clone)]
pub struct SkipGramModel {
    /// Target ("input") vectors; these are the embeddings that get used.
    pub input: Array2<f64>,
    /// Context ("output") vectors.
    pub output: Array2<f64>,
    /// Mean loss per epoch.
    pub loss_curve: Vec<f64>,
}

impl SkipGramModel {
    /// σ(input[target] · output[context]).
    pub fn pair_score(&self, target: usize, context: usize) -> f64 {
        sigmoid(self.input.row(target).dot(&self.output.row(context)))
    }
}

pub struct SkipGramTrainer {
    config: SkipGramConfig,
    rng: ChaCha8Rng,
    model: SkipGramModel,
    sampler: WeightedIndex<f64>,
    seen: usize,
}

impl SkipGramTrainer {
    /// Negative samples are drawn from the target-frequency distribution
    /// raised to the 3/4 power.
    pub fn new(
        vocab_size: usize,
        windows: &[TrainingWindow],
        config: SkipGramConfig,
    ) -> Result<Self> {
        if vocab_size == 0 || config.dim == 0 {
            return Err(Error::invalid("skip-gram needs a vocabulary and a positive dimension"));
        }
        let mut counts = vec![0.0f64; vocab_size];
        for w in windows {
            if w.target >= vocab_size || w.contexts.iter().any(|&c| c >= vocab_size) {
                return Err(Error::invalid("window id outside the vocabulary"));
            }
            counts[w.target] += 1.0;
        }
        if windows.iter().all(|w| w.contexts.is_empty()) {
            return Err(Error::invalid("no training pairs"));
        }
        let weights: Vec<f64> = counts.iter().map(|c| c.powf(0.75)).collect();
        let sampler = WeightedIndex::new(&weights)
            .map_err(|e| Error::invalid(format!("negative sampler: {e}")))?;

        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let half = 0.5 / config.dim as f64;
        let input = Array2::from_shape_fn((vocab_size, config.dim), |_| rng.gen_range(-half..half));
        let output = Array2::zeros((vocab_size, config.dim));
        Ok(SkipGramTrainer {
            config,
            rng,
            model: SkipGramModel {
                input,
                output,
                loss_curve: Vec::new(),
            },
            sampler,
            seen: 0,
        })
    }

    pub fn model(&self) -> &SkipGramModel {
        &self.model
    }

    /// Runs all configured epochs with a learning rate decaying linearly
    /// from its initial value to 1e-4 of it.
    pub fn train(mut self, windows: &[TrainingWindow]) -> SkipGramModel {
        for _ in 0..self.config.epochs {
            self.run_epoch(windows);
        }
        self.model
    }

    /// One pass over `windows`; returns the mean pair loss.
    pub fn run_epoch(&mut self, windows: &[TrainingWindow]) -> f64 {
        let pairs_per_epoch: usize = windows.iter().map(|w| w.contexts.len()).sum();
        let total = (pairs_per_epoch * self.config.epochs).max(1) as f64;
        let mut epoch_loss = 0.0;
        for w in windows {
            for &c in &w.contexts {
                let progress = (self.seen as f64 / total).min(1.0);
                let lr = self.config.learning_rate * (1.0 - progress).max(1e-4);
                epoch_loss += self.step(w.target, c, lr);
                self.seen += 1;
            }
        }
        let mean = epoch_loss / pairs_per_epoch.max(1) as f64;
        self.model.loss_curve.push(mean);
        mean
    }

    fn step(&mut self, target: usize, context: usize, lr: f64) -> f64 {
        // Draws equal to the context id are skipped, as in word2vec.
        let negs: Vec<usize> = (0..self.config.negatives)
            .map(|_| self.sampler.sample(&mut self.rng))
            .filter(|&n| n != context)
            .collect();
        let m = &mut self.model;
        let neg_views: Vec<_> = negs.iter().map(|&n| m.output.row(n)).collect();
        let g = sgns_loss(m.input.row(target), m.output.row(context), &neg_views);
        drop(neg_views);
        m.input.row_mut(target).scaled_add(-lr, &g.target);
        m.output.row_mut(context).scaled_add(-lr, &g.context);
        for (&n, gn) in negs.iter().zip(&g.negatives) {
            m.output.row_mut(n).scaled_add(-lr, gn);
        }
        g.loss
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_window_raises_positive_score() {
        let windows = vec![TrainingWindow {
            target: 0,
            contexts: vec![1, 2],
        }; 4]
        .into_iter()
        .chain([
            TrainingWindow {
                target: 3,
                contexts: vec![4],
            },
            TrainingWindow {
                target: 4,
                contexts: vec![3],
            },
        ])
        .collect::<Vec<_>>();
        let cfg = SkipGramConfig {
            dim: 8,
            epochs: 5,
            seed: 3,
            ..Default::default()
        };
        let mut trainer = SkipGramTrainer::new(5, &windows, cfg).unwrap();
        let mut last = trainer.model().pair_score(0, 1);
        for epoch in 0..5 {
            trainer.run_epoch(&windows);
            let score = trainer.model().pair_score(0, 1);
            assert!(score > last, "epoch {epoch}: {score} <= {last}");
            last = score;
        }
    }

    #[test]
    fn shape_and_determinism() {
        let windows = vec![
            TrainingWindow {
                target: 0,
                contexts: vec![1, 2, 3],
            },
            TrainingWindow {
                target: 1,
                contexts: vec![0],
            },
        ];
        let cfg = SkipGramConfig {
            epochs: 3,
            ..Default::default()
        };
        let a = SkipGramTrainer::new(4, &windows, cfg).unwrap().train(&windows);
        let b = SkipGramTrainer::new(4, &windows, cfg).unwrap().train(&windows);
        assert_eq!(a.input.dim(), (4, 80));
        assert_eq!(a.input, b.input);
        assert_eq!(a.loss_curve.len(), 3);
    }

    #[test]
    fn rejects_empty_training_data() {
        let windows = vec![TrainingWindow {
            target: 0,
            contexts: vec![],
        }];
        assert!(SkipGramTrainer::new(2, &windows, SkipGramConfig::default()).is_err());
    }
}
