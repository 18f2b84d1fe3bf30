//! Mandible/cranium separation via connected-component labeling.
//!
//! A geometric splitter adequate for synthetic phantoms: among the
//! 26-connected foreground components, the one whose centroid lies anterior
//! of the foramen-magnum origin and lowest along the frame height axis is the
//! mandible; everything else is cranium.

use super::BinaryVolume;
use crate::landmarks::ReferenceFrame;
use crate::{CoreError, Result};

/// Split the foreground into `(cranium, mandible)`. The outputs are disjoint
/// and their union equals the input foreground.
pub fn split_mandible(
    binvol: &BinaryVolume,
    frame: &ReferenceFrame,
) -> Result<(BinaryVolume, BinaryVolume)> {
    let labels = label_components(binvol);
    let n_components = labels.count;
    if n_components < 2 {
        return Err(CoreError::Volume(format!(
            "unsplittable volume: {n_components} foreground component(s), need >= 2"
        )));
    }

    // Component centroids in frame coordinates.
    let mut sums = vec![[0.0f64; 3]; n_components];
    let mut counts = vec![0usize; n_components];
    let [n1, n2, n3] = binvol.dims;
    for v1 in 0..n1 {
        for v2 in 0..n2 {
            for v3 in 0..n3 {
                let lbl = labels.map[binvol.idx(v1, v2, v3)];
                if lbl == 0 {
                    continue;
                }
                let world = [
                    v1 as f64 * binvol.spacing_mm[0],
                    v2 as f64 * binvol.spacing_mm[1],
                    v3 as f64 * binvol.spacing_mm[2],
                ];
                let f = frame.to_frame(world);
                let s = &mut sums[lbl as usize - 1];
                s[0] += f[0];
                s[1] += f[1];
                s[2] += f[2];
                counts[lbl as usize - 1] += 1;
            }
        }
    }
    let centroids: Vec<[f64; 3]> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| [s[0] / c as f64, s[1] / c as f64, s[2] / c as f64])
        .collect();

    // Prefer components anterior of the origin; fall back to all of them.
    let anterior: Vec<usize> = (0..n_components).filter(|&i| centroids[i][1] > 0.0).collect();
    let candidates = if anterior.is_empty() {
        (0..n_components).collect::<Vec<_>>()
    } else {
        anterior
    };
    let mandible_label = 1 + candidates
        .into_iter()
        .min_by(|&a, &b| centroids[a][2].partial_cmp(&centroids[b][2]).unwrap())
        .unwrap() as u32;

    let mut cranium = BinaryVolume::zeros(binvol.dims, binvol.spacing_mm)?;
    let mut mandible = BinaryVolume::zeros(binvol.dims, binvol.spacing_mm)?;
    for (i, &lbl) in labels.map.iter().enumerate() {
        if lbl == 0 {
            continue;
        }
        if lbl == mandible_label {
            mandible.data[i] = 1;
        } else {
            cranium.data[i] = 1;
        }
    }
    Ok((cranium, mandible))
}

pub(crate) struct ComponentLabels {
    /// 0 = background, components numbered from 1 in scan order.
    pub map: Vec<u32>,
    pub count: usize,
}

/// 26-connected component labeling by breadth-first flood fill, deterministic
/// in scan order.
pub(crate) fn label_components(binvol: &BinaryVolume) -> ComponentLabels {
    let [n1, n2, n3] = binvol.dims;
    let mut map = vec![0u32; binvol.data.len()];
    let mut count = 0u32;
    let mut queue: Vec<[i64; 3]> = Vec::new();

    for v1 in 0..n1 {
        for v2 in 0..n2 {
            for v3 in 0..n3 {
                let start = binvol.idx(v1, v2, v3);
                if binvol.data[start] == 0 || map[start] != 0 {
                    continue;
                }
                count += 1;
                map[start] = count;
                queue.clear();
                queue.push([v1 as i64, v2 as i64, v3 as i64]);
                while let Some(v) = queue.pop() {
                    for d1 in -1..=1i64 {
                        for d2 in -1..=1i64 {
                            for d3 in -1..=1i64 {
                                if d1 == 0 && d2 == 0 && d3 == 0 {
                                    continue;
                                }
                                let w = [v[0] + d1, v[1] + d2, v[2] + d3];
                                if w[0] < 0
                                    || w[1] < 0
                                    || w[2] < 0
                                    || w[0] as usize >= n1
                                    || w[1] as usize >= n2
                                    || w[2] as usize >= n3
                                {
                                    continue;
                                }
                                let wi =
                                    binvol.idx(w[0] as usize, w[1] as usize, w[2] as usize);
                                if binvol.data[wi] == 1 && map[wi] == 0 {
                                    map[wi] = count;
                                    queue.push(w);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    ComponentLabels { map, count: count as usize }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmarks::ReferenceFrame;

    fn identity_frame() -> ReferenceFrame {
        ReferenceFrame {
            origin: [0.0; 3],
            axes: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    fn blob(b: &mut BinaryVolume, center: [i64; 3], r: i64) {
        for v1 in center[0] - r..=center[0] + r {
            for v2 in center[1] - r..=center[1] + r {
                for v3 in center[2] - r..=center[2] + r {
                    let d = (v1 - center[0]).pow(2) + (v2 - center[1]).pow(2)
                        + (v3 - center[2]).pow(2);
                    if d <= r * r && v1 >= 0 && v2 >= 0 && v3 >= 0 {
                        let i = b.idx(v1 as usize, v2 as usize, v3 as usize);
                        b.data[i] = 1;
                    }
                }
            }
        }
    }

    #[test]
    fn lower_blob_is_mandible() {
        let mut b = BinaryVolume::zeros([20, 20, 20], [1.0; 3]).unwrap();
        blob(&mut b, [10, 10, 14], 3); // upper
        blob(&mut b, [10, 10, 4], 3); // lower, strictly below
        let (cr, md) = split_mandible(&b, &identity_frame()).unwrap();
        // The lower blob's voxels are all mandible.
        assert_eq!(md.get(10, 10, 4), 1);
        assert_eq!(cr.get(10, 10, 14), 1);
        assert_eq!(md.get(10, 10, 14), 0);
        // Disjoint, union = input.
        for i in 0..b.data.len() {
            assert_eq!(cr.data[i] & md.data[i], 0);
            assert_eq!(cr.data[i] | md.data[i], b.data[i]);
        }
    }

    #[test]
    fn single_component_is_unsplittable() {
        let mut b = BinaryVolume::zeros([10, 10, 10], [1.0; 3]).unwrap();
        blob(&mut b, [5, 5, 5], 3);
        assert!(split_mandible(&b, &identity_frame()).is_err());
    }

    #[test]
    fn empty_volume_is_unsplittable() {
        let b = BinaryVolume::zeros([6, 6, 6], [1.0; 3]).unwrap();
        assert!(split_mandible(&b, &identity_frame()).is_err());
    }

    #[test]
    fn component_count_is_correct() {
        let mut b = BinaryVolume::zeros([24, 24, 24], [1.0; 3]).unwrap();
        blob(&mut b, [5, 5, 5], 2);
        blob(&mut b, [15, 15, 15], 2);
        blob(&mut b, [5, 18, 18], 2);
        let labels = label_components(&b);
        assert_eq!(labels.count, 3);
    }
}
