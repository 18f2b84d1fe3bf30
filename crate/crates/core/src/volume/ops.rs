//! Thresholding, partial integration, and patch extraction.

use super::{BinaryVolume, Image2D, Patch2D, Patch3D, VoxelVolume};
use crate::{CoreError, Result};

/// Threshold a volume: output voxel is 1 iff the input voxel is >= `rho`.
pub fn binarize(vol: &VoxelVolume, rho: f64) -> BinaryVolume {
    let data = vol
        .data
        .iter()
        .map(|&v| u8::from(f64::from(v) >= rho))
        .collect();
    BinaryVolume {
        dims: vol.dims,
        spacing_mm: vol.spacing_mm,
        data,
    }
}

/// Sum the slab `v1 in [a, b]` (1-based, inclusive) of a binary volume into a
/// 2D image over `(v2, v3)`.
pub fn integrate_midsagittal(binvol: &BinaryVolume, a: usize, b: usize) -> Result<Image2D> {
    let n1 = binvol.dims[0];
    if a < 1 || b < a || b > n1 {
        return Err(CoreError::Volume(format!(
            "slab bounds [{a}, {b}] invalid for n1 = {n1} (need 1 <= a <= b <= n1)"
        )));
    }
    let (n2, n3) = (binvol.dims[1], binvol.dims[2]);
    let mut data = vec![0.0f64; n2 * n3];
    for v1 in (a - 1)..b {
        let slab = &binvol.data[v1 * n2 * n3..(v1 + 1) * n2 * n3];
        for (acc, &v) in data.iter_mut().zip(slab.iter()) {
            *acc += f64::from(v);
        }
    }
    Image2D::new([n2, n3], [binvol.spacing_mm[1], binvol.spacing_mm[2]], data)
}

/// Cut a cube of side `eta` centered at `center` (floor convention for even
/// `eta`); out-of-bounds voxels read as 0.
pub fn extract_patch_3d(binvol: &BinaryVolume, center: [i64; 3], eta: usize) -> Patch3D {
    assert!(eta >= 1, "patch edge length must be >= 1");
    let h = (eta / 2) as i64;
    let corner = [center[0] - h, center[1] - h, center[2] - h];
    let mut data = vec![0.0f64; eta * eta * eta];
    for i in 0..eta {
        let v1 = corner[0] + i as i64;
        if v1 < 0 || v1 as usize >= binvol.dims[0] {
            continue;
        }
        for j in 0..eta {
            let v2 = corner[1] + j as i64;
            if v2 < 0 || v2 as usize >= binvol.dims[1] {
                continue;
            }
            let lo = corner[2].max(0);
            let hi = (corner[2] + eta as i64).min(binvol.dims[2] as i64);
            if lo >= hi {
                continue;
            }
            let src = binvol.idx(v1 as usize, v2 as usize, lo as usize);
            let dst = (i * eta + j) * eta + (lo - corner[2]) as usize;
            for (d, s) in data[dst..dst + (hi - lo) as usize]
                .iter_mut()
                .zip(&binvol.data[src..src + (hi - lo) as usize])
            {
                *d = f64::from(*s);
            }
        }
    }
    Patch3D { eta, center, data }
}

/// 2D analogue of [`extract_patch_3d`] on a real-valued image.
pub fn extract_patch_2d(img: &Image2D, center: [i64; 2], eta: usize) -> Patch2D {
    assert!(eta >= 1, "patch edge length must be >= 1");
    let h = (eta / 2) as i64;
    let corner = [center[0] - h, center[1] - h];
    let mut data = vec![0.0f64; eta * eta];
    for i in 0..eta {
        let u = corner[0] + i as i64;
        if u < 0 || u as usize >= img.dims[0] {
            continue;
        }
        let lo = corner[1].max(0);
        let hi = (corner[1] + eta as i64).min(img.dims[1] as i64);
        if lo >= hi {
            continue;
        }
        let src = img.idx(u as usize, lo as usize);
        let dst = i * eta + (lo - corner[1]) as usize;
        data[dst..dst + (hi - lo) as usize]
            .copy_from_slice(&img.data[src..src + (hi - lo) as usize]);
    }
    Patch2D { eta, center, data }
}
