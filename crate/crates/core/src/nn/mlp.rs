//! Multi-layer perceptron: affine layers with ReLU on hidden layers and a
//! configurable output activation.

use super::dense::{relu, relu_backward, Dense, DenseGrad};
use super::{Activation, HasParams};
use crate::{CoreError, Result};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MlpSpec {
    /// Layer widths from input to output, e.g. [270, 128, 96, 64, 9].
    pub widths: Vec<usize>,
    pub output_activation: Activation,
}

impl MlpSpec {
    pub fn new(widths: Vec<usize>, output_activation: Activation) -> Self {
        assert!(widths.len() >= 2, "MLP needs at least input and output widths");
        Self { widths, output_activation }
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.widths.last().unwrap()
    }

    pub fn param_count(&self) -> usize {
        self.widths.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    pub spec: MlpSpec,
    pub layers: Vec<Dense>,
}

/// Per-layer inputs and pre-activations, sufficient for exact backprop.
#[derive(Debug, Clone)]
pub struct MlpCache {
    pub layer_inputs: Vec<Vec<f64>>,
    pub preacts: Vec<Vec<f64>>,
    pub output: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct MlpGrads {
    pub layers: Vec<DenseGrad>,
}

impl MlpGrads {
    pub fn zeros(params: &MlpParams) -> Self {
        Self { layers: params.layers.iter().map(Dense::zero_grad).collect() }
    }

    pub fn accumulate(&mut self, other: &MlpGrads) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            for (x, y) in a.dw.iter_mut().zip(&b.dw) {
                *x += y;
            }
            for (x, y) in a.db.iter_mut().zip(&b.db) {
                *x += y;
            }
        }
    }
}

impl MlpParams {
    pub fn init<R: Rng>(spec: MlpSpec, rng: &mut R) -> Self {
        let layers = spec
            .widths
            .windows(2)
            .map(|w| Dense::he_init(rng, w[0], w[1]))
            .collect();
        Self { spec, layers }
    }

    /// Deterministic affine + ReLU composition; the cache is sufficient for
    /// exact backprop.
    pub fn forward(&self, x: &[f64]) -> Result<(Vec<f64>, MlpCache)> {
        if x.len() != self.spec.input_dim() {
            return Err(CoreError::Shape(format!(
                "mlp input {} != {}",
                x.len(),
                self.spec.input_dim()
            )));
        }
        let n = self.layers.len();
        let mut layer_inputs = Vec::with_capacity(n);
        let mut preacts = Vec::with_capacity(n);
        let mut cur = x.to_vec();
        for (li, layer) in self.layers.iter().enumerate() {
            layer_inputs.push(cur.clone());
            let pre = layer.forward(&cur);
            preacts.push(pre.clone());
            cur = pre;
            let apply_relu =
                li + 1 < n || self.spec.output_activation == Activation::Relu;
            if apply_relu {
                relu(&mut cur);
            }
        }
        let cache = MlpCache { layer_inputs, preacts, output: cur.clone() };
        Ok((cur, cache))
    }

    /// Exact reverse-mode gradients of the forward map.
    pub fn backward(&self, cache: &MlpCache, dy: &[f64]) -> Result<(MlpGrads, Vec<f64>)> {
        if dy.len() != self.spec.output_dim() {
            return Err(CoreError::Shape(format!(
                "mlp output grad {} != {}",
                dy.len(),
                self.spec.output_dim()
            )));
        }
        if cache.layer_inputs.len() != self.layers.len() {
            return Err(CoreError::Shape("stale cache: layer count mismatch".into()));
        }
        let mut grads = MlpGrads::zeros(self);
        let n = self.layers.len();
        let mut d = dy.to_vec();
        for li in (0..n).rev() {
            let apply_relu =
                li + 1 < n || self.spec.output_activation == Activation::Relu;
            if apply_relu {
                relu_backward(&cache.preacts[li], &mut d);
            }
            d = self.layers[li].backward(&cache.layer_inputs[li], &d, &mut grads.layers[li]);
        }
        Ok((grads, d))
    }

    /// Accumulating variant used by full-batch training loops.
    pub fn backward_into(
        &self,
        cache: &MlpCache,
        dy: &[f64],
        grads: &mut MlpGrads,
    ) -> Result<Vec<f64>> {
        let n = self.layers.len();
        let mut d = dy.to_vec();
        for li in (0..n).rev() {
            let apply_relu =
                li + 1 < n || self.spec.output_activation == Activation::Relu;
            if apply_relu {
                relu_backward(&cache.preacts[li], &mut d);
            }
            d = self.layers[li].backward(&cache.layer_inputs[li], &d, &mut grads.layers[li]);
        }
        Ok(d)
    }
}

impl HasParams for MlpParams {
    fn params(&self) -> Vec<&Vec<f64>> {
        let mut out = Vec::with_capacity(self.layers.len() * 2);
        for l in &self.layers {
            out.push(&l.w);
            out.push(&l.b);
        }
        out
    }

    fn params_mut(&mut self) -> Vec<&mut Vec<f64>> {
        let mut out = Vec::with_capacity(self.layers.len() * 2);
        for l in &mut self.layers {
            out.push(&mut l.w);
            out.push(&mut l.b);
        }
        out
    }
}

impl MlpGrads {
    pub fn tensors(&self) -> Vec<&Vec<f64>> {
        let mut out = Vec::with_capacity(self.layers.len() * 2);
        for l in &self.layers {
            out.push(&l.dw);
            out.push(&l.db);
        }
        out
    }

    pub fn into_tensors(self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.layers.len() * 2);
        for l in self.layers {
            out.push(l.dw);
            out.push(l.db);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_weights_pass_nonnegative_input_through() {
        let spec = MlpSpec::new(vec![3, 3], Activation::Linear);
        let mut params = MlpParams::init(spec, &mut ChaCha8Rng::seed_from_u64(0));
        params.layers[0].w = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        params.layers[0].b = vec![0.0; 3];
        let x = [0.5, 2.0, 0.0];
        let (y, _) = params.forward(&x).unwrap();
        assert_eq!(y, x.to_vec());
    }

    #[test]
    fn zero_weights_output_the_bias() {
        let spec = MlpSpec::new(vec![4, 5, 2], Activation::Linear);
        let mut params = MlpParams::init(spec, &mut ChaCha8Rng::seed_from_u64(1));
        for l in &mut params.layers {
            l.w.iter_mut().for_each(|w| *w = 0.0);
        }
        params.layers[0].b = vec![1.0; 5];
        params.layers[1].b = vec![-0.25, 0.75];
        let (y, _) = params.forward(&[9.0, 9.0, 9.0, 9.0]).unwrap();
        assert_eq!(y, vec![-0.25, 0.75]);
    }

    #[test]
    fn forward_matches_straight_line_oracle() {
        // Random 4-8-3 net recomputed with independent matrix arithmetic.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let spec = MlpSpec::new(vec![4, 8, 3], Activation::Linear);
        let params = MlpParams::init(spec, &mut rng);
        let x: Vec<f64> = (0..4).map(|i| (i as f64) * 0.3 - 0.5).collect();
        let (y, _) = params.forward(&x).unwrap();

        let l0 = &params.layers[0];
        let mut h = vec![0.0; 8];
        for o in 0..8 {
            let mut acc = l0.b[o];
            for i in 0..4 {
                acc += l0.w[o * 4 + i] * x[i];
            }
            h[o] = acc.max(0.0);
        }
        let l1 = &params.layers[1];
        for o in 0..3 {
            let mut acc = l1.b[o];
            for i in 0..8 {
                acc += l1.w[o * 8 + i] * h[i];
            }
            assert!((y[o] - acc).abs() < 1e-12, "unit {o}: {} vs {acc}", y[o]);
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let spec = MlpSpec::new(vec![4, 2], Activation::Linear);
        let params = MlpParams::init(spec, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(params.forward(&[1.0; 3]).is_err());
        let (_, cache) = params.forward(&[1.0; 4]).unwrap();
        assert!(params.backward(&cache, &[1.0; 3]).is_err());
    }

    #[test]
    fn param_count_matches_spec_formula() {
        let spec = MlpSpec::new(vec![30, 64, 64, 9], Activation::Linear);
        let params = MlpParams::init(spec.clone(), &mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(params.param_count(), spec.param_count());
        assert_eq!(spec.param_count(), 30 * 64 + 64 + 64 * 64 + 64 + 64 * 9 + 9);
    }
}
