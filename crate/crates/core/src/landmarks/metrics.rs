//! 3D point-to-point error metrics.

use super::LandmarkSet;
use crate::{CoreError, Result};

/// Per-landmark Euclidean distances in mm plus mean and population SD over a
/// mask.
#[derive(Debug, Clone, PartialEq)]
pub struct PointErrors {
    /// (1-based landmark index, distance in mm), in mask order.
    pub per_landmark: Vec<(usize, f64)>,
    pub mean: f64,
    pub sd: f64,
}

/// Point-to-point error between prediction and truth over `mask` (1-based
/// indices). Both sets must be in the same frame and scale.
pub fn point_to_point_error(
    pred: &LandmarkSet,
    truth: &LandmarkSet,
    mask: &[usize],
) -> Result<PointErrors> {
    if pred.len() != truth.len() {
        return Err(CoreError::Landmarks(format!(
            "set size mismatch: {} vs {}",
            pred.len(),
            truth.len()
        )));
    }
    if mask.is_empty() {
        return Err(CoreError::Landmarks("empty mask".into()));
    }
    let mut per_landmark = Vec::with_capacity(mask.len());
    for &i in mask {
        if i < 1 || i > pred.len() {
            return Err(CoreError::Landmarks(format!("unknown landmark index {i}")));
        }
        let a = pred.get(i);
        let b = truth.get(i);
        let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
        per_landmark.push((i, d));
    }
    let n = per_landmark.len() as f64;
    let mean = per_landmark.iter().map(|&(_, d)| d).sum::<f64>() / n;
    let var = per_landmark.iter().map(|&(_, d)| (d - mean) * (d - mean)).sum::<f64>() / n;
    Ok(PointErrors { per_landmark, mean, sd: var.sqrt() })
}

impl PointErrors {
    /// Error of a specific landmark, if present in the mask.
    pub fn of(&self, index: usize) -> Option<f64> {
        self.per_landmark.iter().find(|&&(i, _)| i == index).map(|&(_, d)| d)
    }

    /// Rows formatted like a reference-landmark error table, e.g.
    /// `ANS 1.20 +/- 0.45` style formatting is left to the caller; this
    /// returns (name, error) pairs given the registry.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        let reg = super::registry();
        self.per_landmark.iter().map(|&(i, d)| (reg.get(i).name, d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{self, rotation};
    use crate::landmarks::registry;

    #[test]
    fn identical_sets_have_zero_error() {
        let set = LandmarkSet::new((0..90).map(|i| [i as f64, 0.0, 0.0]).collect());
        let e = point_to_point_error(&set, &set, &registry().cranial_mask()).unwrap();
        assert!(e.per_landmark.iter().all(|&(_, d)| d == 0.0));
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.sd, 0.0);
    }

    #[test]
    fn single_offset_landmark_reports_its_distance() {
        let truth = LandmarkSet::zeros(90);
        let mut pred = truth.clone();
        pred.set(10, [3.0, 0.0, 0.0]);
        let e = point_to_point_error(&pred, &truth, &[9, 10, 11]).unwrap();
        assert_eq!(e.of(10), Some(3.0));
        assert_eq!(e.of(9), Some(0.0));
        assert!((e.mean - 1.0).abs() < 1e-15);
    }

    #[test]
    fn error_is_symmetric_and_rigid_motion_invariant() {
        let truth = LandmarkSet::new((0..90).map(|i| [i as f64, (i % 7) as f64, 2.0]).collect());
        let pred = truth.map_coords(|c| [c[0] + 0.5, c[1] - 0.25, c[2]]);
        let mask = registry().mandibular_mask();
        let e1 = point_to_point_error(&pred, &truth, &mask).unwrap();
        let e2 = point_to_point_error(&truth, &pred, &mask).unwrap();
        assert_eq!(e1, e2);

        let r = rotation(geom::normalize([1.0, 1.0, 0.0]).unwrap(), 0.8);
        let t = [5.0, -2.0, 11.0];
        let rt = |s: &LandmarkSet| s.map_coords(|c| geom::add(geom::mat_vec(&r, c), t));
        let e3 = point_to_point_error(&rt(&pred), &rt(&truth), &mask).unwrap();
        for (a, b) in e1.per_landmark.iter().zip(&e3.per_landmark) {
            assert!((a.1 - b.1).abs() < 1e-9);
        }
    }

    #[test]
    fn mask_mismatch_is_rejected() {
        let a = LandmarkSet::zeros(90);
        let b = LandmarkSet::zeros(46);
        assert!(point_to_point_error(&a, &b, &[1]).is_err());
        assert!(point_to_point_error(&a, &a, &[]).is_err());
        assert!(point_to_point_error(&a, &a, &[100]).is_err());
    }

    #[test]
    fn named_rows_use_registry_names() {
        let truth = LandmarkSet::zeros(90);
        let mut pred = truth.clone();
        pred.set(1, [1.2, 0.0, 0.0]);
        let e = point_to_point_error(&pred, &truth, &[1]).unwrap();
        assert_eq!(e.named(), vec![("ANS", 1.2)]);
    }
}
