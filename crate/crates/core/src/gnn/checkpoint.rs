use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::binfmt;
use crate::error::{Error, Result};
use crate::graph_builder::{FeatureLayout, FeatureSet};

use super::model::{GnnModel, Layer};
use super::sizing::{resolve_sizing, GnnConfig};

const MAGIC: &[u8; 4] = b"TGNN";
pub const CHECKPOINT_VERSION: u32 = 1;

/// A trained model with the feature description it expects.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub model: GnnModel,
    pub feature_set: FeatureSet,
    pub layout: FeatureLayout,
}

#[derive(Serialize, Deserialize)]
struct Header {
    config: GnnConfig,
    dims: Vec<usize>,
    feature_set: FeatureSet,
    layout: FeatureLayout,
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let header = Header {
            config: self.model.config,
            dims: self.model.dims().to_vec(),
            feature_set: self.feature_set,
            layout: self.layout,
        };
        let mut w = binfmt::Writer::new(MAGIC, CHECKPOINT_VERSION, &header);
        for l in self.model.layers() {
            w.f32s(l.w.iter().map(|&v| v as f32));
            w.f32s(l.b.iter().map(|&v| v as f32));
        }
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (h, mut r): (Header, _) =
            binfmt::Reader::open(bytes, MAGIC, CHECKPOINT_VERSION, "checkpoint")?;
        let dims = resolve_sizing(&h.config)?;
        if dims != h.dims {
            return Err(Error::Corrupt {
                what: "checkpoint",
                reason: format!("header dims {:?} disagree with config {:?}", h.dims, dims),
            });
        }
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for d in dims.windows(2) {
            let w = r.f32s(2 * d[0] * d[1])?;
            let b = r.f32s(d[1])?;
            layers.push(Layer {
                w: Array2::from_shape_vec((2 * d[0], d[1]), w.into_iter().map(f64::from).collect())
                    .expect("length checked"),
                b: Array1::from_iter(b.into_iter().map(f64::from)),
            });
        }
        r.finish()?;
        Ok(Checkpoint {
            model: GnnModel::from_layers(h.config, layers)?,
            feature_set: h.feature_set,
            layout: h.layout,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(fs::write(path, self.to_bytes())?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnn::Sizing;

    #[test]
    fn round_trip_at_f32_precision() {
        let cfg = GnnConfig::new(13, Sizing::Base { h_dim: 6 });
        let ck = Checkpoint {
            model: GnnModel::new(cfg).unwrap(),
            feature_set: FeatureSet::Bbox,
            layout: FeatureLayout::default(),
        };
        let back = Checkpoint::from_bytes(&ck.to_bytes()).unwrap();
        assert_eq!(back.feature_set, FeatureSet::Bbox);
        assert_eq!(back.model.dims(), ck.model.dims());
        for (a, b) in back.model.params_flat().iter().zip(ck.model.params_flat()) {
            assert_eq!(*a, b as f32 as f64);
        }
        assert_eq!(Checkpoint::from_bytes(&back.to_bytes()).unwrap(), back);
    }

    #[test]
    fn truncated_rejected() {
        let cfg = GnnConfig::new(13, Sizing::Base { h_dim: 3 });
        let ck = Checkpoint {
            model: GnnModel::new(cfg).unwrap(),
            feature_set: FeatureSet::Bbox,
            layout: FeatureLayout::default(),
        };
        let bytes = ck.to_bytes();
        assert!(Checkpoint::from_bytes(&bytes[..bytes.len() - 4]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(Checkpoint::from_bytes(&extra).is_err());
    }
}
