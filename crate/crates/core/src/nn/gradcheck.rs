//! Central finite-difference verification of analytic gradients.

use super::HasParams;

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    /// Largest relative deviation between analytic and numeric gradients.
    pub max_rel_dev: f64,
    /// (tensor index, element index) achieving the maximum.
    pub worst: (usize, usize),
    pub pass: bool,
}

/// Compare `analytic` (one tensor per parameter tensor, declaration order)
/// against central finite differences of `loss` with step `h`. Passes iff the
/// maximum relative deviation is below `tol`. Entries where both gradients
/// are below 1e-6 in magnitude are treated as matching.
pub fn grad_check<M: HasParams>(
    model: &mut M,
    loss: impl Fn(&M) -> f64,
    analytic: &[Vec<f64>],
    h: f64,
    tol: f64,
) -> GradCheckReport {
    let n_tensors = model.params().len();
    assert_eq!(analytic.len(), n_tensors, "analytic gradient tensor count");

    let mut max_rel_dev = 0.0f64;
    let mut worst = (0usize, 0usize);
    for t in 0..n_tensors {
        let len = model.params()[t].len();
        assert_eq!(analytic[t].len(), len, "analytic tensor {t} length");
        for i in 0..len {
            let old = model.params()[t][i];
            model.params_mut()[t][i] = old + h;
            let plus = loss(model);
            model.params_mut()[t][i] = old - h;
            let minus = loss(model);
            model.params_mut()[t][i] = old;

            let numeric = (plus - minus) / (2.0 * h);
            let a = analytic[t][i];
            let denom = a.abs().max(numeric.abs());
            if denom < 1e-6 {
                continue;
            }
            let rel = (a - numeric).abs() / denom;
            if rel > max_rel_dev {
                max_rel_dev = rel;
                worst = (t, i);
            }
        }
    }
    GradCheckReport { max_rel_dev, worst, pass: max_rel_dev < tol }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Activation, MlpParams, MlpSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sq_loss(params: &MlpParams, x: &[f64], target: &[f64]) -> f64 {
        let (y, _) = params.forward(x).unwrap();
        y.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    #[test]
    fn fresh_mlp_passes_gradient_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = MlpSpec::new(vec![4, 6, 3], Activation::Linear);
        let mut params = MlpParams::init(spec, &mut rng);
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let target: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();

        let (y, cache) = params.forward(&x).unwrap();
        let dy: Vec<f64> = y.iter().zip(&target).map(|(a, b)| 2.0 * (a - b)).collect();
        let (grads, _) = params.backward(&cache, &dy).unwrap();
        let analytic = grads.into_tensors();

        let report = grad_check(&mut params, |p| sq_loss(p, &x, &target), &analytic, 1e-5, 1e-4);
        assert!(report.pass, "max rel dev {}", report.max_rel_dev);
    }

    #[test]
    fn corrupted_backward_is_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let spec = MlpSpec::new(vec![3, 5, 2], Activation::Linear);
        let mut params = MlpParams::init(spec, &mut rng);
        let x = vec![0.3, -0.7, 1.1];
        let target = vec![0.25, -0.5];

        let (y, cache) = params.forward(&x).unwrap();
        let dy: Vec<f64> = y.iter().zip(&target).map(|(a, b)| 2.0 * (a - b)).collect();
        let (grads, _) = params.backward(&cache, &dy).unwrap();
        let mut analytic = grads.into_tensors();
        // Corrupt the gradients by 10%.
        for t in &mut analytic {
            for g in t.iter_mut() {
                *g *= 1.1;
            }
        }
        let report = grad_check(&mut params, |p| sq_loss(p, &x, &target), &analytic, 1e-5, 1e-4);
        assert!(!report.pass);
        assert!(report.max_rel_dev > 0.05);
    }
}
