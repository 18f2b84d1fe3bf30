//! Adam optimizer with bias correction.

use crate::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamConfig {
    pub fn with_lr(lr: f64) -> Self {
        Self { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// First/second moment estimates mirroring the parameter tensors.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub step: u64,
    pub cfg: AdamConfig,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new(cfg: AdamConfig, shapes: &[usize]) -> Self {
        Self {
            step: 0,
            cfg,
            m: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            v: shapes.iter().map(|&n| vec![0.0; n]).collect(),
        }
    }

    pub fn for_params(cfg: AdamConfig, params: &[&Vec<f64>]) -> Self {
        let shapes: Vec<usize> = params.iter().map(|p| p.len()).collect();
        Self::new(cfg, &shapes)
    }
}

/// One Adam update over all parameter tensors. Non-finite gradient entries
/// signal divergence; deterministic for identical inputs.
pub fn adam_step(
    state: &mut AdamState,
    params: &mut [&mut Vec<f64>],
    grads: &[Vec<f64>],
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(CoreError::Shape(format!(
            "adam: {} params, {} grads, {} moments",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    for (p, g) in params.iter().zip(grads.iter()) {
        if p.len() != g.len() {
            return Err(CoreError::Shape(format!(
                "adam tensor size {} != grad {}",
                p.len(),
                g.len()
            )));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(CoreError::Divergence("non-finite gradient entry".into()));
        }
    }

    state.step += 1;
    let t = state.step as i32;
    let AdamConfig { lr, beta1, beta2, eps } = state.cfg;
    let bc1 = 1.0 - beta1.powi(t);
    let bc2 = 1.0 - beta2.powi(t);

    for ((p, g), (m, v)) in params
        .iter_mut()
        .zip(grads.iter())
        .zip(state.m.iter_mut().zip(state.v.iter_mut()))
    {
        for i in 0..g.len() {
            m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
            let m_hat = m[i] / bc1;
            let v_hat = v[i] / bc2;
            p[i] -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}
