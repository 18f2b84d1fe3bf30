//! VAE parameter container: a shared ReLU trunk with linear mu / log-sigma
//! heads, and a ReLU decoder with linear output.

use crate::nn::{Activation, Dense, HasParams, MlpCache, MlpParams, MlpSpec};
use crate::{CoreError, Result};
use rand::Rng;

/// Which log term the KL divergence uses; `PaperVerbatim` is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KlForm {
    /// 0.5 * sum(mu^2 + sigma^2 - log sigma - 1)
    PaperVerbatim,
    /// 0.5 * sum(mu^2 + sigma^2 - log sigma^2 - 1)
    Standard,
}

/// The encoder emits log sigma; sigma = exp(.) clamped to this range.
pub const SIGMA_CLAMP_MIN: f64 = 1e-6;
pub const SIGMA_CLAMP_MAX: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VaeSpec {
    /// 270 for the full variant, 138 for the cranial variant.
    pub input_dim: usize,
    pub latent_dim: usize,
    /// Hidden widths of the encoder trunk (all ReLU, including its output).
    pub encoder_hidden: Vec<usize>,
    /// Hidden widths of the decoder (ReLU hidden, linear output).
    pub decoder_hidden: Vec<usize>,
    pub kl_form: KlForm,
}

impl VaeSpec {
    pub fn new(input_dim: usize, latent_dim: usize, hidden: Vec<usize>) -> Self {
        assert!(latent_dim < input_dim, "latent dim must be smaller than input dim");
        let mut decoder_hidden = hidden.clone();
        decoder_hidden.reverse();
        Self {
            input_dim,
            latent_dim,
            encoder_hidden: hidden,
            decoder_hidden,
            kl_form: KlForm::PaperVerbatim,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VaeModel {
    pub spec: VaeSpec,
    /// input -> h, ReLU on every layer including the last.
    pub trunk: MlpParams,
    pub mu_head: Dense,
    pub log_sigma_head: Dense,
    /// latent -> input reconstruction, linear output.
    pub decoder: MlpParams,
}

pub struct EncodeCache {
    pub trunk: MlpCache,
    pub h: Vec<f64>,
    pub mu: Vec<f64>,
    pub log_sigma: Vec<f64>,
    pub sigma: Vec<f64>,
    /// true where exp(log sigma) escaped the clamp range (gradient is zero
    /// there).
    pub clamped: Vec<bool>,
}

impl VaeModel {
    pub fn init<R: Rng>(spec: VaeSpec, rng: &mut R) -> Self {
        let mut trunk_widths = vec![spec.input_dim];
        trunk_widths.extend_from_slice(&spec.encoder_hidden);
        let trunk = MlpParams::init(MlpSpec::new(trunk_widths, Activation::Relu), rng);
        let h_dim = *spec.encoder_hidden.last().expect("encoder needs hidden layers");
        let mu_head = Dense::he_init(rng, h_dim, spec.latent_dim);
        let log_sigma_head = Dense::he_init(rng, h_dim, spec.latent_dim);
        let mut dec_widths = vec![spec.latent_dim];
        dec_widths.extend_from_slice(&spec.decoder_hidden);
        dec_widths.push(spec.input_dim);
        let decoder = MlpParams::init(MlpSpec::new(dec_widths, Activation::Linear), rng);
        Self { spec, trunk, mu_head, log_sigma_head, decoder }
    }

    /// Encoder heads: (mu, sigma) with sigma = clamp(exp(log sigma)).
    pub fn encode_heads(&self, input: &[f64]) -> Result<(Vec<f64>, Vec<f64>, EncodeCache)> {
        if input.len() != self.spec.input_dim {
            return Err(CoreError::Shape(format!(
                "vae encode input {} != {}",
                input.len(),
                self.spec.input_dim
            )));
        }
        let (h, trunk_cache) = self.trunk.forward(input)?;
        let mu = self.mu_head.forward(&h);
        let log_sigma = self.log_sigma_head.forward(&h);
        let mut clamped = vec![false; log_sigma.len()];
        let sigma: Vec<f64> = log_sigma
            .iter()
            .zip(clamped.iter_mut())
            .map(|(&ls, cl)| {
                let s = ls.exp();
                if s < SIGMA_CLAMP_MIN {
                    *cl = true;
                    SIGMA_CLAMP_MIN
                } else if s > SIGMA_CLAMP_MAX {
                    *cl = true;
                    SIGMA_CLAMP_MAX
                } else {
                    s
                }
            })
            .collect();
        let cache = EncodeCache {
            trunk: trunk_cache,
            h,
            mu: mu.clone(),
            log_sigma,
            sigma: sigma.clone(),
            clamped,
        };
        Ok((mu, sigma, cache))
    }

    /// Reparameterized latent: z = mu + sigma .* noise. The noise is
    /// injected explicitly so callers control determinism; zero noise gives
    /// z = mu exactly.
    pub fn encode(&self, input: &[f64], noise: &[f64]) -> Result<Vec<f64>> {
        if noise.len() != self.spec.latent_dim {
            return Err(CoreError::Shape(format!(
                "vae noise dim {} != {}",
                noise.len(),
                self.spec.latent_dim
            )));
        }
        let (mu, sigma, _) = self.encode_heads(input)?;
        Ok(mu
            .iter()
            .zip(sigma.iter())
            .zip(noise.iter())
            .map(|((&m, &s), &n)| m + s * n)
            .collect())
    }

    pub fn decode(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.spec.latent_dim {
            return Err(CoreError::Shape(format!(
                "vae decode input {} != latent dim {}",
                z.len(),
                self.spec.latent_dim
            )));
        }
        Ok(self.decoder.forward(z)?.0)
    }
}

impl HasParams for VaeModel {
    fn params(&self) -> Vec<&Vec<f64>> {
        let mut out = self.trunk.params();
        out.push(&self.mu_head.w);
        out.push(&self.mu_head.b);
        out.push(&self.log_sigma_head.w);
        out.push(&self.log_sigma_head.b);
        out.extend(self.decoder.params());
        out
    }

    fn params_mut(&mut self) -> Vec<&mut Vec<f64>> {
        let mut out = self.trunk.params_mut();
        out.push(&mut self.mu_head.w);
        out.push(&mut self.mu_head.b);
        out.push(&mut self.log_sigma_head.w);
        out.push(&mut self.log_sigma_head.b);
        out.extend(self.decoder.params_mut());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small_vae(seed: u64) -> VaeModel {
        VaeModel::init(VaeSpec::new(12, 3, vec![10, 8]), &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn zero_noise_encoding_equals_mu() {
        let vae = small_vae(3);
        let x: Vec<f64> = (0..12).map(|i| (i as f64) / 11.0 - 0.5).collect();
        let z = vae.encode(&x, &[0.0; 3]).unwrap();
        let (mu, _, _) = vae.encode_heads(&x).unwrap();
        assert_eq!(z, mu);
    }

    #[test]
    fn encoding_is_bit_identical_across_calls() {
        let vae = small_vae(4);
        let x: Vec<f64> = (0..12).map(|i| (i as f64) * 0.1).collect();
        let noise = [0.3, -1.2, 0.9];
        let z1 = vae.encode(&x, &noise).unwrap();
        let z2 = vae.encode(&x, &noise).unwrap();
        assert_eq!(z1, z2);
    }

    #[test]
    fn sigma_floor_suppresses_noise() {
        let mut vae = small_vae(5);
        // Force a hugely negative log-sigma so sigma clamps at the floor.
        vae.log_sigma_head.w.iter_mut().for_each(|w| *w = 0.0);
        vae.log_sigma_head.b.iter_mut().for_each(|b| *b = -100.0);
        let x = vec![0.25; 12];
        let z0 = vae.encode(&x, &[0.0; 3]).unwrap();
        let z1 = vae.encode(&x, &[5.0, -5.0, 5.0]).unwrap();
        for (a, b) in z0.iter().zip(&z1) {
            assert!((a - b).abs() <= 5.0 * SIGMA_CLAMP_MIN);
        }
    }

    #[test]
    fn decode_of_zero_latent_is_bias_driven() {
        let mut vae = small_vae(6);
        for l in &mut vae.decoder.layers {
            l.w.iter_mut().for_each(|w| *w = 0.0);
        }
        let n_layers = vae.decoder.layers.len();
        vae.decoder.layers[n_layers - 1].b = (0..12).map(|i| i as f64).collect();
        let y = vae.decode(&[0.0; 3]).unwrap();
        assert_eq!(y, (0..12).map(|i| i as f64).collect::<Vec<_>>());
    }

    #[test]
    fn dims_are_enforced() {
        let vae = small_vae(7);
        assert!(vae.encode(&[0.0; 11], &[0.0; 3]).is_err());
        assert!(vae.encode(&[0.0; 12], &[0.0; 2]).is_err());
        assert!(vae.decode(&[0.0; 4]).is_err());
        assert_eq!(vae.decode(&[0.0; 3]).unwrap().len(), 12);
    }
}
