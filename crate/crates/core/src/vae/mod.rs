//! VAE latent representation of landmark configurations and the
//! local-to-global completion map: decode(phi(reference landmarks)).
//!
//! Instantiated twice by the pipeline: over all 90 landmarks (latent dim 9)
//! and over the 46 cranial landmarks (latent dim 15, fed by the cranial
//! references plus the three finely detected midsagittal landmarks).

mod model;
mod train;

pub use model::{KlForm, VaeModel, VaeSpec, SIGMA_CLAMP_MAX, SIGMA_CLAMP_MIN};
pub use train::{
    encode_mean, mean_reconstruction_error, train_phi, train_vae, PhiTrainConfig, VaeTrainConfig,
};

use crate::nn::MlpParams;

/// Deterministic local-to-global estimate: decode(phi(reference vector)).
pub fn estimate_all(vae: &VaeModel, phi: &MlpParams, reference: &[f64]) -> crate::Result<Vec<f64>> {
    let (z, _) = phi.forward(reference)?;
    vae.decode(&z)
}

/// KL divergence of N(mu, diag(sigma^2)) from N(0, I).
///
/// The default form is 0.5 * sum(mu^2 + sigma^2 - log sigma - 1), matching
/// the source formulation verbatim; [`KlForm::Standard`] selects the
/// conventional 0.5 * sum(mu^2 + sigma^2 - log sigma^2 - 1).
pub fn kl_divergence(mu: &[f64], sigma: &[f64], form: KlForm) -> crate::Result<f64> {
    if mu.len() != sigma.len() {
        return Err(crate::CoreError::Shape(format!(
            "kl: mu dim {} != sigma dim {}",
            mu.len(),
            sigma.len()
        )));
    }
    if sigma.iter().any(|&s| !(s > 0.0)) {
        return Err(crate::CoreError::Landmarks(
            "kl: sigma must be positive element-wise".into(),
        ));
    }
    let mut acc = 0.0;
    for (&m, &s) in mu.iter().zip(sigma.iter()) {
        let log_term = match form {
            KlForm::PaperVerbatim => s.ln(),
            KlForm::Standard => 2.0 * s.ln(),
        };
        acc += m * m + s * s - log_term - 1.0;
    }
    Ok(0.5 * acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_distributions_have_zero_kl() {
        let mu = vec![0.0; 9];
        let sigma = vec![1.0; 9];
        assert_eq!(kl_divergence(&mu, &sigma, KlForm::PaperVerbatim).unwrap(), 0.0);
        assert_eq!(kl_divergence(&mu, &sigma, KlForm::Standard).unwrap(), 0.0);
    }

    #[test]
    fn unit_mean_single_dim_is_half() {
        let v = kl_divergence(&[1.0], &[1.0], KlForm::PaperVerbatim).unwrap();
        assert_eq!(v, 0.5);
    }

    #[test]
    fn sigma_e_matches_term_by_term_evaluation() {
        // d=1, mu=0, sigma=e: 0.5 * (e^2 - 1 - 1).
        let e = std::f64::consts::E;
        let want = 0.5 * (e * e - e.ln() - 1.0);
        let got = kl_divergence(&[0.0], &[e], KlForm::PaperVerbatim).unwrap();
        assert!((got - want).abs() < 1e-12);
        assert!((got - 2.6945280494653247).abs() < 1e-12);
    }

    #[test]
    fn standard_form_differs_by_the_log_term() {
        let sigma = 0.5f64;
        let verbatim = kl_divergence(&[0.0], &[sigma], KlForm::PaperVerbatim).unwrap();
        let standard = kl_divergence(&[0.0], &[sigma], KlForm::Standard).unwrap();
        assert!((verbatim - standard - 0.5 * sigma.ln()).abs() < 1e-12);
    }

    #[test]
    fn non_positive_sigma_is_rejected() {
        assert!(kl_divergence(&[0.0], &[0.0], KlForm::PaperVerbatim).is_err());
        assert!(kl_divergence(&[0.0], &[-1.0], KlForm::PaperVerbatim).is_err());
        assert!(kl_divergence(&[0.0, 0.0], &[1.0], KlForm::PaperVerbatim).is_err());
    }
}
