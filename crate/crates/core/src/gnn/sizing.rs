use serde::{Deserialize, Serialize};

use crate::doc_model::TokenLabel;
use crate::error::{Error, Result};

pub const BASE_HIDDEN: usize = 1000;
pub const PADDED_IN_DIM: usize = 861;

/// How hidden widths (and possibly the input width) are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Sizing {
    /// Fixed hidden width.
    Base { h_dim: usize },
    /// Input zero-padded to `in_dim`, fixed hidden width.
    Padding { in_dim: usize, h_dim: usize },
    /// Hidden width from a parameter budget.
    Scaled { p_no: usize },
}

impl Sizing {
    pub fn base() -> Self {
        Sizing::Base { h_dim: BASE_HIDDEN }
    }

    pub fn padding() -> Self {
        Sizing::Padding {
            in_dim: PADDED_IN_DIM,
            h_dim: BASE_HIDDEN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnnConfig {
    /// Number of message-passing layers.
    pub l_no: usize,
    pub sizing: Sizing,
    /// Width of the feature vectors fed to the model (before padding).
    pub in_dim: usize,
    pub out_dim: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl GnnConfig {
    pub fn new(in_dim: usize, sizing: Sizing) -> Self {
        GnnConfig {
            l_no: 4,
            sizing,
            in_dim,
            out_dim: TokenLabel::COUNT,
            learning_rate: 1e-3,
            epochs: 200,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l_no < 2 {
            return Err(Error::invalid(format!("l_no = {} (need at least 2)", self.l_no)));
        }
        if self.in_dim == 0 || self.out_dim == 0 {
            return Err(Error::invalid("in_dim and out_dim must be positive"));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::invalid(format!("learning rate {}", self.learning_rate)));
        }
        Ok(())
    }
}

/// `(l_no - 2) h^2 + (in + out) h`: weight count without biases.
pub fn scaled_param_count(l_no: usize, in_dim: usize, out_dim: usize, h: usize) -> usize {
    (l_no - 2) * h * h + (in_dim + out_dim) * h
}

/// Largest `h` with `scaled_param_count(h) <= p_no`.
pub fn scaled_hidden_dim(l_no: usize, in_dim: usize, out_dim: usize, p_no: usize) -> Result<usize> {
    let a = (l_no - 2) as f64;
    let b = (in_dim + out_dim) as f64;
    let p = p_no as f64;
    let root = if a == 0.0 {
        p / b
    } else {
        (-b + (b * b + 4.0 * a * p).sqrt()) / (2.0 * a)
    };
    let mut h = root.max(0.0).floor() as usize;
    while scaled_param_count(l_no, in_dim, out_dim, h + 1) <= p_no {
        h += 1;
    }
    while h > 0 && scaled_param_count(l_no, in_dim, out_dim, h) > p_no {
        h -= 1;
    }
    if h == 0 {
        return Err(Error::invalid(format!(
            "parameter budget {p_no} too small for in_dim {in_dim}, out_dim {out_dim}"
        )));
    }
    Ok(h)
}

/// Layer widths `d_0..d_{l_no}`; `d_0` is the (possibly padded) input width.
pub fn resolve_sizing(config: &GnnConfig) -> Result<Vec<usize>> {
    config.validate()?;
    let (d0, h) = match config.sizing {
        Sizing::Base { h_dim } => (config.in_dim, h_dim),
        Sizing::Padding { in_dim, h_dim } => {
            if in_dim < config.in_dim {
                return Err(Error::invalid(format!(
                    "padding target {in_dim} below feature width {}",
                    config.in_dim
                )));
            }
            (in_dim, h_dim)
        }
        Sizing::Scaled { p_no } => (
            config.in_dim,
            scaled_hidden_dim(config.l_no, config.in_dim, config.out_dim, p_no)?,
        ),
    };
    if h == 0 {
        return Err(Error::invalid("hidden width must be positive"));
    }
    let mut dims = vec![d0];
    dims.extend(std::iter::repeat_n(h, config.l_no - 1));
    dims.push(config.out_dim);
    Ok(dims)
}
