//! Full-batch VAE and reference-to-latent map training.

use super::model::{EncodeCache, KlForm, VaeModel, VaeSpec};
use crate::nn::{
    adam_step, AdamConfig, AdamState, Dense, DenseGrad, HasParams, MlpGrads, MlpParams, MlpSpec,
};
use crate::{CoreError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Fixed chunk size for parallel gradient accumulation. Partial sums are
/// combined in chunk order, so results do not depend on thread scheduling or
/// thread count.
const GRAD_CHUNK: usize = 16;

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct VaeTrainConfig {
    pub spec: VaeSpec,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PhiTrainConfig {
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
}

struct VaeGrads {
    trunk: MlpGrads,
    mu_head: DenseGrad,
    log_sigma_head: DenseGrad,
    decoder: MlpGrads,
}

impl VaeGrads {
    fn zeros(model: &VaeModel) -> Self {
        Self {
            trunk: MlpGrads::zeros(&model.trunk),
            mu_head: model.mu_head.zero_grad(),
            log_sigma_head: model.log_sigma_head.zero_grad(),
            decoder: MlpGrads::zeros(&model.decoder),
        }
    }

    fn accumulate(&mut self, other: &VaeGrads) {
        self.trunk.accumulate(&other.trunk);
        for (a, b) in self.mu_head.dw.iter_mut().zip(&other.mu_head.dw) {
            *a += b;
        }
        for (a, b) in self.mu_head.db.iter_mut().zip(&other.mu_head.db) {
            *a += b;
        }
        for (a, b) in self.log_sigma_head.dw.iter_mut().zip(&other.log_sigma_head.dw) {
            *a += b;
        }
        for (a, b) in self.log_sigma_head.db.iter_mut().zip(&other.log_sigma_head.db) {
            *a += b;
        }
        self.decoder.accumulate(&other.decoder);
    }

    /// Tensors in the same declaration order as `VaeModel::params`.
    fn into_tensors(self) -> Vec<Vec<f64>> {
        let mut out = self.trunk.into_tensors();
        out.push(self.mu_head.dw);
        out.push(self.mu_head.db);
        out.push(self.log_sigma_head.dw);
        out.push(self.log_sigma_head.db);
        out.extend(self.decoder.into_tensors());
        out
    }
}

/// Loss and gradients of one sample:
/// ||decode(z) - x||^2 + KL(N(mu, sigma^2) || N(0, I)) with z = mu + sigma*eps.
pub(crate) fn sample_loss_grads(
    model: &VaeModel,
    x: &[f64],
    noise: &[f64],
    grads: &mut VaeGrads,
) -> Result<f64> {
    let (mu, sigma, cache) = model.encode_heads(x)?;
    let EncodeCache { trunk: trunk_cache, h, log_sigma: _, clamped, .. } = cache;
    let d = mu.len();
    let z: Vec<f64> = (0..d).map(|l| mu[l] + sigma[l] * noise[l]).collect();

    let (xhat, dec_cache) = model.decoder.forward(&z)?;
    let mut recon = 0.0;
    let mut dxhat = vec![0.0; xhat.len()];
    for i in 0..xhat.len() {
        let diff = xhat[i] - x[i];
        recon += diff * diff;
        dxhat[i] = 2.0 * diff;
    }

    let kl = super::kl_divergence(&mu, &sigma, model.spec.kl_form)?;

    let dz = model.decoder.backward_into(&dec_cache, &dxhat, &mut grads.decoder)?;

    // d/dmu: reconstruction path + mu from the KL term.
    let mut dmu = vec![0.0; d];
    let mut dlog_sigma = vec![0.0; d];
    for l in 0..d {
        dmu[l] = dz[l] + mu[l];
        let dkl_dsigma = match model.spec.kl_form {
            KlForm::PaperVerbatim => sigma[l] - 0.5 / sigma[l],
            KlForm::Standard => sigma[l] - 1.0 / sigma[l],
        };
        let dsigma = dz[l] * noise[l] + dkl_dsigma;
        // sigma = exp(log sigma); zero gradient where the clamp is active.
        dlog_sigma[l] = if clamped[l] { 0.0 } else { dsigma * sigma[l] };
    }

    let dh_mu = model.mu_head.backward(&h, &dmu, &mut grads.mu_head);
    let dh_ls = model.log_sigma_head.backward(&h, &dlog_sigma, &mut grads.log_sigma_head);
    let dh: Vec<f64> = dh_mu.iter().zip(&dh_ls).map(|(a, b)| a + b).collect();
    model.trunk.backward_into(&trunk_cache, &dh, &mut grads.trunk)?;

    Ok(recon + kl)
}

/// Train a VAE on normalized landmark vectors by full-batch Adam with fresh
/// reparameterization noise every epoch. Returns the model and the per-epoch
/// loss trace (sum over the dataset).
pub fn train_vae(data: &[Vec<f64>], cfg: &VaeTrainConfig) -> Result<(VaeModel, Vec<f64>)> {
    if data.len() < 2 {
        return Err(CoreError::Shape(format!(
            "vae training needs >= 2 samples, got {}",
            data.len()
        )));
    }
    for (i, x) in data.iter().enumerate() {
        if x.len() != cfg.spec.input_dim {
            return Err(CoreError::Shape(format!(
                "sample {i} has dim {}, spec wants {}",
                x.len(),
                cfg.spec.input_dim
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut model = VaeModel::init(cfg.spec.clone(), &mut rng);
    let shapes: Vec<usize> = model.params().iter().map(|t| t.len()).collect();
    let mut adam = AdamState::new(AdamConfig::with_lr(cfg.lr), &shapes);

    let d = cfg.spec.latent_dim;
    let mut trace = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        // Fresh per-sample noise, drawn sequentially for determinism.
        let noise: Vec<Vec<f64>> = (0..data.len())
            .map(|_| (0..d).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();

        let chunks: Vec<(f64, VaeGrads)> = data
            .par_chunks(GRAD_CHUNK)
            .zip(noise.par_chunks(GRAD_CHUNK))
            .map(|(xs, eps)| {
                let mut g = VaeGrads::zeros(&model);
                let mut loss = 0.0;
                for (x, e) in xs.iter().zip(eps.iter()) {
                    loss += sample_loss_grads(&model, x, e, &mut g)
                        .expect("shapes validated before training");
                }
                (loss, g)
            })
            .collect();

        let mut total = VaeGrads::zeros(&model);
        let mut loss = 0.0;
        for (l, g) in &chunks {
            loss += l;
            total.accumulate(g);
        }
        if !loss.is_finite() {
            return Err(CoreError::Divergence(format!(
                "vae training: non-finite loss at epoch {epoch}"
            )));
        }
        trace.push(loss);

        let grads = total.into_tensors();
        let mut params = model.params_mut();
        adam_step(&mut adam, &mut params, &grads)?;
    }
    Ok((model, trace))
}

/// Noise-free latent code of a landmark vector: z = mu.
pub fn encode_mean(model: &VaeModel, x: &[f64]) -> Result<Vec<f64>> {
    let (mu, _, _) = model.encode_heads(x)?;
    Ok(mu)
}

/// Train the reference-to-latent map phi by full-batch Adam on
/// sum ||phi(ref_i) - z_i||^2.
pub fn train_phi(
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
    cfg: &PhiTrainConfig,
) -> Result<(MlpParams, Vec<f64>)> {
    if inputs.is_empty() || inputs.len() != targets.len() {
        return Err(CoreError::Shape(format!(
            "phi training: {} inputs vs {} targets",
            inputs.len(),
            targets.len()
        )));
    }
    let in_dim = inputs[0].len();
    let out_dim = targets[0].len();
    let mut widths = vec![in_dim];
    widths.extend_from_slice(&cfg.hidden);
    widths.push(out_dim);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut model = MlpParams::init(MlpSpec::new(widths, crate::nn::Activation::Linear), &mut rng);
    let shapes: Vec<usize> = model.params().iter().map(|t| t.len()).collect();
    let mut adam = AdamState::new(AdamConfig::with_lr(cfg.lr), &shapes);

    let mut trace = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let chunks: Vec<(f64, MlpGrads)> = inputs
            .par_chunks(GRAD_CHUNK)
            .zip(targets.par_chunks(GRAD_CHUNK))
            .map(|(xs, ts)| {
                let mut g = MlpGrads::zeros(&model);
                let mut loss = 0.0;
                for (x, t) in xs.iter().zip(ts.iter()) {
                    let (y, cache) = model.forward(x).expect("validated shapes");
                    let mut dy = vec![0.0; y.len()];
                    for i in 0..y.len() {
                        let diff = y[i] - t[i];
                        loss += diff * diff;
                        dy[i] = 2.0 * diff;
                    }
                    model
                        .backward_into(&cache, &dy, &mut g)
                        .expect("validated shapes");
                }
                (loss, g)
            })
            .collect();

        let mut total = MlpGrads::zeros(&model);
        let mut loss = 0.0;
        for (l, g) in &chunks {
            loss += l;
            total.accumulate(g);
        }
        if !loss.is_finite() {
            return Err(CoreError::Divergence(format!(
                "phi training: non-finite loss at epoch {epoch}"
            )));
        }
        trace.push(loss);
        let grads = total.into_tensors();
        let mut params = model.params_mut();
        adam_step(&mut adam, &mut params, &grads)?;
    }
    Ok((model, trace))
}

/// Mean reconstruction error of the zero-noise autoencoding path, useful as
/// a training diagnostic.
pub fn mean_reconstruction_error(model: &VaeModel, data: &[Vec<f64>]) -> Result<f64> {
    let mut acc = 0.0;
    for x in data {
        let z = encode_mean(model, x)?;
        let xhat = model.decode(&z)?;
        let e: f64 = xhat.iter().zip(x.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        acc += e.sqrt();
    }
    Ok(acc / data.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_cfg(epochs: usize) -> VaeTrainConfig {
        VaeTrainConfig {
            spec: VaeSpec::new(12, 2, vec![16, 12]),
            epochs,
            lr: 0.01,
            seed: 77,
        }
    }

    fn factor_dataset(n: usize, seed: u64) -> Vec<Vec<f64>> {
        // One latent factor embedded linearly in 12 dims plus small noise.
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dirs: Vec<f64> = (0..12).map(|i| ((i * 7 + 3) % 11) as f64 / 11.0 - 0.5).collect();
        (0..n)
            .map(|_| {
                let f: f64 = rng.gen_range(-2.0..2.0);
                dirs.iter().map(|d| d * f + rng.gen_range(-0.01..0.01)).collect()
            })
            .collect()
    }

    #[test]
    fn repeated_vector_memorizes_with_bounded_kl() {
        let data = vec![vec![0.4; 12]; 8];
        let (model, trace) = train_vae(&data, &tiny_cfg(800)).unwrap();
        assert!(trace[trace.len() - 1] < trace[0]);
        let z = encode_mean(&model, &data[0]).unwrap();
        let xhat = model.decode(&z).unwrap();
        let recon: f64 = xhat.iter().zip(&data[0]).map(|(a, b)| (a - b) * (a - b)).sum();
        assert!(recon < 0.05, "reconstruction {recon}");
    }

    #[test]
    fn loss_trace_decreases_on_factor_data() {
        let data = factor_dataset(24, 3);
        let (_, trace) = train_vae(&data, &tiny_cfg(300)).unwrap();
        assert!(trace[trace.len() - 1] < trace[0]);
    }

    #[test]
    fn training_is_deterministic_under_seed() {
        let data = factor_dataset(16, 4);
        let (m1, t1) = train_vae(&data, &tiny_cfg(50)).unwrap();
        let (m2, t2) = train_vae(&data, &tiny_cfg(50)).unwrap();
        assert_eq!(t1, t2);
        for (a, b) in m1.params().iter().zip(m2.params().iter()) {
            assert_eq!(a.as_slice(), b.as_slice());
        }
    }

    #[test]
    fn phi_recovers_latent_on_one_factor_data() {
        // Targets are a fixed linear map of the inputs; phi should fit it.
        let inputs: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let f = i as f64 / 10.0 - 1.0;
                vec![f, 2.0 * f, -f]
            })
            .collect();
        let targets: Vec<Vec<f64>> = inputs.iter().map(|x| vec![x[0] + x[1]]).collect();
        let cfg = PhiTrainConfig { hidden: vec![8], epochs: 2500, lr: 0.01, seed: 1 };
        let (phi, trace) = train_phi(&inputs, &targets, &cfg).unwrap();
        assert!(trace[trace.len() - 1] < trace[0]);
        let (y, _) = phi.forward(&inputs[3]).unwrap();
        assert_eq!(y.len(), 1);
        assert!((y[0] - targets[3][0]).abs() < 0.05, "{} vs {}", y[0], targets[3][0]);
    }

    #[test]
    fn too_small_dataset_is_rejected() {
        let data = vec![vec![0.0; 12]];
        assert!(train_vae(&data, &tiny_cfg(1)).is_err());
    }
}
