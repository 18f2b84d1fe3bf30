//! Landmark sets, sub-vector selection, and cranial-volume normalization.

use super::idx;
use crate::{CoreError, Result};

/// A named, indexed 90-point 3D configuration in mm with a per-landmark
/// validity mask. Flattening in index order yields the 270-vector; masked
/// selection yields the cranial (138), mandibular (132), and reference (30)
/// sub-vectors.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LandmarkSet {
    pub coords: Vec<[f64; 3]>,
    pub valid: Vec<bool>,
}

impl LandmarkSet {
    pub fn new(coords: Vec<[f64; 3]>) -> Self {
        let n = coords.len();
        Self { coords, valid: vec![true; n] }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![[0.0; 3]; n])
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate by 1-based registry index.
    pub fn get(&self, index: usize) -> [f64; 3] {
        self.coords[index - 1]
    }

    pub fn set(&mut self, index: usize, p: [f64; 3]) {
        self.coords[index - 1] = p;
    }

    /// Concatenate the masked landmarks in ascending index order into a flat
    /// vector of length 3 * mask.len(). Mask entries are 1-based.
    pub fn select(&self, mask: &[usize]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(mask.len() * 3);
        for &i in mask {
            if i < 1 || i > self.coords.len() {
                return Err(CoreError::Landmarks(format!("unknown landmark index {i}")));
            }
            out.extend_from_slice(&self.coords[i - 1]);
        }
        Ok(out)
    }

    /// Inverse of [`Self::select`]: write a flat vector back at the masked
    /// indices.
    pub fn scatter(&mut self, mask: &[usize], values: &[f64]) -> Result<()> {
        if values.len() != mask.len() * 3 {
            return Err(CoreError::Shape(format!(
                "scatter: {} values for mask of {}",
                values.len(),
                mask.len()
            )));
        }
        for (k, &i) in mask.iter().enumerate() {
            if i < 1 || i > self.coords.len() {
                return Err(CoreError::Landmarks(format!("unknown landmark index {i}")));
            }
            self.coords[i - 1] = [values[3 * k], values[3 * k + 1], values[3 * k + 2]];
        }
        Ok(())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.coords.len() * 3);
        for c in &self.coords {
            out.extend_from_slice(c);
        }
        out
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 3 != 0 {
            return Err(CoreError::Shape(format!("flat length {} not divisible by 3", flat.len())));
        }
        let coords = flat.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Ok(Self::new(coords))
    }

    /// Apply a function to every coordinate, keeping validity.
    pub fn map_coords(&self, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        Self {
            coords: self.coords.iter().map(|&c| f(c)).collect(),
            valid: self.valid.clone(),
        }
    }
}

/// Uniform scale bringing a subject's cranial volume to the training-set
/// reference volume.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormalizationParams {
    /// Subject cranial volume in mm^3 (paper definition: length x depth x
    /// height box, not a literal volume).
    pub cranial_volume: f64,
    /// Uniform scale factor = (reference_volume / cranial_volume)^(1/3).
    pub scale: f64,
    /// Training-set average cranial volume in mm^3.
    pub reference_volume: f64,
}

impl NormalizationParams {
    pub fn new(cranial_volume: f64, reference_volume: f64) -> Result<Self> {
        if !(cranial_volume > 0.0) || !(reference_volume > 0.0) {
            return Err(CoreError::Landmarks(format!(
                "non-positive cranial volume ({cranial_volume}) or reference ({reference_volume})"
            )));
        }
        let scale = (reference_volume / cranial_volume).cbrt();
        Ok(Self { cranial_volume, scale, reference_volume })
    }
}

/// Cranial volume of a landmark set given in frame coordinates:
/// |v1(PoL) - v1(PoR)| * |v2(PoL) - v2(Na)| * |v3(Bregma) - v3(CFM)| in mm^3.
pub fn compute_cranial_volume(set: &LandmarkSet) -> Result<f64> {
    let po_l = set.get(idx::PO_L);
    let po_r = set.get(idx::PO_R);
    let na = set.get(idx::NA);
    let cfm = set.get(idx::CFM);
    let bregma = set.get(idx::BREGMA);
    let length = (po_l[0] - po_r[0]).abs();
    let depth = (po_l[1] - na[1]).abs();
    let height = (bregma[2] - cfm[2]).abs();
    for (label, v) in [("length", length), ("depth", depth), ("height", height)] {
        if !(v > 0.0) {
            return Err(CoreError::Degenerate(format!(
                "cranial volume has zero {label} extent"
            )));
        }
    }
    Ok(length * depth * height)
}

/// Scale all coordinates uniformly about the frame origin so the cranial
/// volume becomes the reference volume.
pub fn normalize(set: &LandmarkSet, params: &NormalizationParams) -> LandmarkSet {
    let s = params.scale;
    set.map_coords(|c| [c[0] * s, c[1] * s, c[2] * s])
}

/// Exact inverse of [`normalize`].
pub fn denormalize(set: &LandmarkSet, params: &NormalizationParams) -> LandmarkSet {
    let s = 1.0 / params.scale;
    set.map_coords(|c| [c[0] * s, c[1] * s, c[2] * s])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmarks::registry;

    fn sample_set() -> LandmarkSet {
        let mut set = LandmarkSet::zeros(90);
        set.set(idx::PO_L, [60.0, 0.0, 10.0]);
        set.set(idx::PO_R, [-60.0, 0.0, 10.0]);
        set.set(idx::NA, [0.0, 100.0, 50.0]);
        set.set(idx::CFM, [0.0, 0.0, 0.0]);
        set.set(idx::BREGMA, [0.0, 5.0, 130.0]);
        set
    }

    #[test]
    fn cranial_volume_is_the_product_of_extents() {
        let set = sample_set();
        let v = compute_cranial_volume(&set).unwrap();
        assert_eq!(v, 120.0 * 100.0 * 130.0);
    }

    #[test]
    fn coincident_porions_are_degenerate() {
        let mut set = sample_set();
        set.set(idx::PO_R, set.get(idx::PO_L));
        assert!(compute_cranial_volume(&set).is_err());
    }

    #[test]
    fn select_lengths_match_the_masks() {
        let reg = registry();
        let set = sample_set();
        assert_eq!(set.select(&reg.reference_mask()).unwrap().len(), 30);
        assert_eq!(set.select(&reg.cranial_mask()).unwrap().len(), 138);
        assert_eq!(set.select(&reg.mandibular_mask()).unwrap().len(), 132);
        assert_eq!(set.select(&[]).unwrap().len(), 0);
        assert_eq!(set.to_flat().len(), 270);
    }

    #[test]
    fn select_rejects_unknown_index() {
        let set = sample_set();
        assert!(set.select(&[91]).is_err());
        assert!(set.select(&[0]).is_err());
    }

    #[test]
    fn select_then_scatter_is_identity_on_mask() {
        let reg = registry();
        let mut set = sample_set();
        let mask = reg.reference_mask();
        let vals = set.select(&mask).unwrap();
        let mut other = LandmarkSet::zeros(90);
        other.scatter(&mask, &vals).unwrap();
        assert_eq!(other.select(&mask).unwrap(), vals);
        // Scatter back into the original is a no-op.
        let before = set.clone();
        set.scatter(&mask, &vals).unwrap();
        assert_eq!(set, before);
    }

    #[test]
    fn identity_scale_is_identity() {
        let set = sample_set();
        let params = NormalizationParams::new(1000.0, 1000.0).unwrap();
        assert_eq!(params.scale, 1.0);
        assert_eq!(normalize(&set, &params), set);
    }

    #[test]
    fn eightfold_volume_halves_coordinates() {
        let set = sample_set();
        let v = compute_cranial_volume(&set).unwrap();
        let params = NormalizationParams::new(v, v / 8.0).unwrap();
        assert!((params.scale - 0.5).abs() < 1e-15);
        let normd = normalize(&set, &params);
        for i in 1..=90 {
            let a = set.get(i);
            let b = normd.get(i);
            for k in 0..3 {
                assert!((b[k] - a[k] * 0.5).abs() < 1e-12);
            }
        }
        let v2 = compute_cranial_volume(&normd).unwrap();
        assert!((v2 - v / 8.0).abs() / (v / 8.0) < 1e-12);
    }

    #[test]
    fn normalize_then_denormalize_is_identity() {
        let set = sample_set();
        let v = compute_cranial_volume(&set).unwrap();
        let params = NormalizationParams::new(v, 1.7e6).unwrap();
        let round = denormalize(&normalize(&set, &params), &params);
        for i in 1..=90 {
            for k in 0..3 {
                assert!((round.get(i)[k] - set.get(i)[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn scaling_input_cubes_the_volume() {
        let set = sample_set();
        let v1 = compute_cranial_volume(&set).unwrap();
        let lambda = 1.3;
        let scaled = set.map_coords(|c| [c[0] * lambda, c[1] * lambda, c[2] * lambda]);
        let v2 = compute_cranial_volume(&scaled).unwrap();
        assert!((v2 - v1 * lambda.powi(3)).abs() / v2 < 1e-12);
    }
}
