use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_builder::PageGraph;

use super::infer::infer;
use super::model::{Gradients, GnnModel, Layer};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

pub struct Adam {
    lr: f64,
    t: i32,
    m: Gradients,
    v: Gradients,
}

fn zeros_like(model: &GnnModel) -> Gradients {
    model
        .layers()
        .iter()
        .map(|l| Layer {
            w: ndarray::Array2::zeros(l.w.raw_dim()),
            b: ndarray::Array1::zeros(l.b.len()),
        })
        .collect()
}

impl Adam {
    pub fn new(model: &GnnModel, lr: f64) -> Self {
        Adam {
            lr,
            t: 0,
            m: zeros_like(model),
            v: zeros_like(model),
        }
    }

    pub fn step(&mut self, model: &mut GnnModel, grads: &Gradients) {
        self.t += 1;
        let c1 = 1.0 - BETA1.powi(self.t);
        let c2 = 1.0 - BETA2.powi(self.t);
        let lr = self.lr;
        for (k, layer) in model.layers_mut().iter_mut().enumerate() {
            let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
                *m = BETA1 * *m + (1.0 - BETA1) * g;
                *v = BETA2 * *v + (1.0 - BETA2) * g * g;
                *p -= lr * (*m / c1) / ((*v / c2).sqrt() + EPS);
            };
            let (m, v, g) = (&mut self.m[k], &mut self.v[k], &grads[k]);
            ndarray::Zip::from(&mut layer.w)
                .and(&g.w)
                .and(&mut m.w)
                .and(&mut v.w)
                .for_each(|p, &g, m, v| update(p, g, m, v));
            ndarray::Zip::from(&mut layer.b)
                .and(&g.b)
                .and(&mut m.b)
                .and(&mut v.b)
                .for_each(|p, &g, m, v| update(p, g, m, v));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Node-weighted mean training loss of every epoch.
    pub loss_curve: Vec<f64>,
    /// Validation node accuracy after every epoch (empty without validation
    /// graphs).
    pub val_accuracy: Vec<f64>,
}

/// Fraction of labeled nodes whose predicted class matches.
pub fn node_accuracy(model: &GnnModel, graphs: &[PageGraph]) -> Result<f64> {
    let counts: Vec<(usize, usize)> = graphs
        .par_iter()
        .map(|g| {
            let labels = g
                .labels()
                .ok_or_else(|| Error::invalid("accuracy needs labeled graphs"))?;
            let pred = infer(model, g)?;
            let hits = pred.iter().zip(labels).filter(|(p, l)| p.0 == **l).count();
            Ok((hits, labels.len()))
        })
        .collect::<Result<_>>()?;
    let (hits, total) = counts
        .iter()
        .fold((0, 0), |(h, t), &(a, b)| (h + a, t + b));
    Ok(if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    })
}

/// Adam on the mean node cross-entropy, one step per page, pages shuffled
/// every epoch from the config seed.
pub fn train(model: &mut GnnModel, graphs: &[PageGraph], val: &[PageGraph]) -> Result<TrainReport> {
    train_with(model, graphs, val, |_, _| {})
}

/// [`train`] with a callback receiving `(epoch, loss)` after every epoch.
pub fn train_with(
    model: &mut GnnModel,
    graphs: &[PageGraph],
    val: &[PageGraph],
    mut on_epoch: impl FnMut(usize, f64),
) -> Result<TrainReport> {
    if graphs.is_empty() {
        return Err(Error::invalid("no training graphs"));
    }
    let cfg = model.config;
    let mut adam = Adam::new(model, cfg.learning_rate);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut order: Vec<usize> = (0..graphs.len()).collect();
    let mut report = TrainReport {
        loss_curve: Vec::with_capacity(cfg.epochs),
        val_accuracy: Vec::new(),
    };
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let (mut sum, mut nodes) = (0.0, 0usize);
        for &i in &order {
            let g = &graphs[i];
            if g.num_nodes() == 0 {
                continue;
            }
            let (loss, grads) = model.loss_and_grad(g)?;
            sum += loss * g.num_nodes() as f64;
            nodes += g.num_nodes();
            adam.step(model, &grads);
        }
        let loss = if nodes == 0 { 0.0 } else { sum / nodes as f64 };
        if !loss.is_finite() {
            return Err(Error::invalid(format!("training diverged at epoch {epoch}")));
        }
        report.loss_curve.push(loss);
        if !val.is_empty() {
            report.val_accuracy.push(node_accuracy(model, val)?);
        }
        log::debug!("epoch {epoch}: loss {loss:.5}");
        on_epoch(epoch, loss);
    }
    Ok(report)
}
