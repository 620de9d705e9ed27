//! Weighted GraphSAGE-style node classifier.

mod checkpoint;
mod infer;
mod model;
mod sizing;
mod train;

pub use checkpoint::{Checkpoint, CHECKPOINT_VERSION};
pub use infer::{argmax, infer};
pub use model::{aggregate, grads_flat, softmax, GnnModel, Gradients, Layer};
pub use sizing::{
    resolve_sizing, scaled_hidden_dim, scaled_param_count, GnnConfig, Sizing, BASE_HIDDEN,
    PADDED_IN_DIM,
};
pub use train::{node_accuracy, train, train_with, Adam, TrainReport};
