use ndarray::{concatenate, s, Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph_builder::PageGraph;

use super::sizing::{resolve_sizing, GnnConfig};

/// One message-passing layer: `h' = act([h | h_N] W + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// `(2 d_in) x d_out`; the top half multiplies the node's own state.
    pub w: Array2<f64>,
    pub b: Array1<f64>,
}

impl Layer {
    pub fn d_in(&self) -> usize {
        self.w.nrows() / 2
    }

    pub fn d_out(&self) -> usize {
        self.w.ncols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnnModel {
    pub config: GnnConfig,
    dims: Vec<usize>,
    layers: Vec<Layer>,
}

/// Per-layer gradients, shaped like the layers.
pub type Gradients = Vec<Layer>;

/// Weighted mean of neighbour states: row `v` is
/// `sum(w_uv * h_u) / |N(v)|`, or zero for isolated nodes.
pub fn aggregate(graph: &PageGraph, h: ArrayView2<f64>) -> Array2<f64> {
    let mut out = Array2::zeros(h.raw_dim());
    for v in 0..graph.num_nodes() {
        let nbrs = graph.neighbors(v);
        if nbrs.is_empty() {
            continue;
        }
        let mut row = out.row_mut(v);
        for &(u, w) in nbrs {
            row.scaled_add(w, &h.row(u));
        }
        row /= nbrs.len() as f64;
    }
    out
}

/// Transpose of [`aggregate`]: pushes gradients on neighbour summaries back
/// to the states they were built from.
fn aggregate_backward(graph: &PageGraph, d_agg: ArrayView2<f64>) -> Array2<f64> {
    let mut out = Array2::zeros(d_agg.raw_dim());
    for v in 0..graph.num_nodes() {
        let nbrs = graph.neighbors(v);
        if nbrs.is_empty() {
            continue;
        }
        let scale = 1.0 / nbrs.len() as f64;
        for &(u, w) in nbrs {
            out.row_mut(u).scaled_add(w * scale, &d_agg.row(v));
        }
    }
    out
}

/// Softmax of one score vector.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

fn softmax_rows(z: &Array2<f64>) -> Array2<f64> {
    let mut p = z.clone();
    for mut row in p.rows_mut() {
        let sm = softmax(row.as_slice().expect("standard layout"));
        row.assign(&Array1::from(sm));
    }
    p
}

struct Trace {
    /// Layer inputs `[h | h_N]`, one per layer.
    inputs: Vec<Array2<f64>>,
    /// Pre-activations, one per layer.
    pre: Vec<Array2<f64>>,
}

impl GnnModel {
    /// Xavier-uniform weights and zero biases, seeded from the config.
    pub fn new(config: GnnConfig) -> Result<Self> {
        let dims = resolve_sizing(&config)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let layers = dims
            .windows(2)
            .map(|d| {
                let (fan_in, fan_out) = (2 * d[0], d[1]);
                let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                Layer {
                    w: Array2::from_shape_fn((fan_in, fan_out), |_| rng.gen_range(-limit..limit)),
                    b: Array1::zeros(fan_out),
                }
            })
            .collect();
        Ok(GnnModel {
            config,
            dims,
            layers,
        })
    }

    pub fn from_layers(config: GnnConfig, layers: Vec<Layer>) -> Result<Self> {
        let dims = resolve_sizing(&config)?;
        if layers.len() != dims.len() - 1 {
            return Err(Error::invalid(format!(
                "{} layers for {} dims",
                layers.len(),
                dims.len()
            )));
        }
        for (k, l) in layers.iter().enumerate() {
            if l.w.dim() != (2 * dims[k], dims[k + 1]) || l.b.len() != dims[k + 1] {
                return Err(Error::invalid(format!(
                    "layer {k}: weights {:?}, bias {}, expected ({}, {})",
                    l.w.dim(),
                    l.b.len(),
                    2 * dims[k],
                    dims[k + 1]
                )));
            }
        }
        Ok(GnnModel {
            config,
            dims,
            layers,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    /// Weight count (without biases) and bias count.
    pub fn param_counts(&self) -> (usize, usize) {
        self.layers
            .iter()
            .fold((0, 0), |(w, b), l| (w + l.w.len(), b + l.b.len()))
    }

    /// Node features zero-extended to the model's input width.
    pub fn input_features(&self, graph: &PageGraph) -> Result<Array2<f64>> {
        let f = graph.features();
        if f.ncols() != self.config.in_dim {
            return Err(Error::WidthMismatch {
                expected: self.config.in_dim,
                actual: f.ncols(),
            });
        }
        if self.dims[0] == f.ncols() {
            return Ok(f.clone());
        }
        let mut x = Array2::zeros((f.nrows(), self.dims[0]));
        x.slice_mut(s![.., ..f.ncols()]).assign(f);
        Ok(x)
    }

    fn run(&self, graph: &PageGraph, keep_trace: bool) -> Result<(Array2<f64>, Option<Trace>)> {
        let mut h = self.input_features(graph)?;
        let mut trace = keep_trace.then(|| Trace {
            inputs: Vec::new(),
            pre: Vec::new(),
        });
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            let agg = aggregate(graph, h.view());
            let input = concatenate![Axis(1), h, agg];
            let z = input.dot(&layer.w) + &layer.b;
            h = if k == last { z.clone() } else { z.mapv(|v| v.max(0.0)) };
            if let Some(t) = trace.as_mut() {
                t.inputs.push(input);
                t.pre.push(z);
            }
        }
        Ok((h, trace))
    }

    /// Raw class scores, one row per node.
    pub fn forward(&self, graph: &PageGraph) -> Result<Array2<f64>> {
        Ok(self.run(graph, false)?.0)
    }

    /// Class probabilities, one row per node.
    pub fn predict_proba(&self, graph: &PageGraph) -> Result<Array2<f64>> {
        Ok(softmax_rows(&self.forward(graph)?))
    }

    fn targets(&self, graph: &PageGraph) -> Result<Vec<usize>> {
        let labels = graph
            .labels()
            .ok_or_else(|| Error::invalid("training graph without labels"))?;
        labels
            .iter()
            .map(|l| {
                let c = l.index();
                if c < self.config.out_dim {
                    Ok(c)
                } else {
                    Err(Error::invalid(format!("label {l} outside {} classes", self.config.out_dim)))
                }
            })
            .collect()
    }

    /// Mean cross-entropy over the graph's nodes.
    pub fn loss(&self, graph: &PageGraph) -> Result<f64> {
        let y = self.targets(graph)?;
        if y.is_empty() {
            return Ok(0.0);
        }
        let p = self.predict_proba(graph)?;
        let total: f64 = y.iter().enumerate().map(|(i, &c)| -p[[i, c]].max(1e-300).ln()).sum();
        Ok(total / y.len() as f64)
    }

    /// Mean cross-entropy and its gradient with respect to every parameter.
    pub fn loss_and_grad(&self, graph: &PageGraph) -> Result<(f64, Gradients)> {
        let y = self.targets(graph)?;
        let (scores, trace) = self.run(graph, true)?;
        let trace = trace.expect("trace requested");
        let n = y.len();
        let mut grads: Gradients = self
            .layers
            .iter()
            .map(|l| Layer {
                w: Array2::zeros(l.w.raw_dim()),
                b: Array1::zeros(l.b.len()),
            })
            .collect();
        if n == 0 {
            return Ok((0.0, grads));
        }
        let mut dz = softmax_rows(&scores);
        let mut loss = 0.0;
        for (i, &c) in y.iter().enumerate() {
            loss -= dz[[i, c]].max(1e-300).ln();
            dz[[i, c]] -= 1.0;
        }
        dz /= n as f64;
        loss /= n as f64;

        for k in (0..self.layers.len()).rev() {
            grads[k].w = trace.inputs[k].t().dot(&dz);
            grads[k].b = dz.sum_axis(Axis(0));
            if k == 0 {
                break;
            }
            let d_input = dz.dot(&self.layers[k].w.t());
            let d = self.dims[k];
            let mut dh = d_input.slice(s![.., ..d]).to_owned();
            dh += &aggregate_backward(graph, d_input.slice(s![.., d..]));
            let pre = &trace.pre[k - 1];
            dh.zip_mut_with(pre, |g, &z| {
                if z <= 0.0 {
                    *g = 0.0
                }
            });
            dz = dh;
        }
        Ok((loss, grads))
    }

    /// All weights then biases, layer by layer.
    pub fn params_flat(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.w.iter().chain(l.b.iter()).copied().collect::<Vec<_>>())
            .collect()
    }

    pub fn set_params_flat(&mut self, params: &[f64]) {
        let mut it = params.iter().copied();
        for l in &mut self.layers {
            for v in l.w.iter_mut().chain(l.b.iter_mut()) {
                *v = it.next().expect("enough parameters");
            }
        }
    }
}

pub fn grads_flat(grads: &Gradients) -> Vec<f64> {
    grads
        .iter()
        .flat_map(|l| l.w.iter().chain(l.b.iter()).copied().collect::<Vec<_>>())
        .collect()
}
