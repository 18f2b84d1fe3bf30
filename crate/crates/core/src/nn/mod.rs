//! Minimal neural-network substrate: fully-connected and convolutional
//! layers, ReLU, max-pooling, Adam, and finite-difference gradient
//! verification. 64-bit floating point throughout; deterministic given a
//! seed.

mod adam;
mod conv;
mod dense;
mod gradcheck;
mod io;
mod mlp;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use conv::{ConvCache, ConvNetParams, ConvNetSpec, LayerSpec, Tensor};
pub use dense::{Dense, DenseGrad};
pub use gradcheck::{grad_check, GradCheckReport};
pub use io::{load_net, save_net, NetBlob};
pub use mlp::{MlpCache, MlpGrads, MlpParams, MlpSpec};

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Activation {
    Relu,
    Linear,
}

/// He-uniform initialization bound for a layer with the given fan-in.
pub(crate) fn he_uniform<R: Rng>(rng: &mut R, fan_in: usize, n: usize) -> Vec<f64> {
    let limit = (6.0 / fan_in as f64).sqrt();
    (0..n).map(|_| rng.gen_range(-limit..limit)).collect()
}

/// Models exposing their parameter tensors in declaration order.
pub trait HasParams {
    fn params(&self) -> Vec<&Vec<f64>>;
    fn params_mut(&mut self) -> Vec<&mut Vec<f64>>;

    fn param_count(&self) -> usize {
        self.params().iter().map(|t| t.len()).sum()
    }
}
