//! Voxel-domain primitives: scalar/binary volumes, 2D images, patch
//! extraction, thresholding, partial midsagittal integration, illuminated
//! rendering, and mandible/cranium splitting.
//!
//! Volumes are indexed `(v1, v2, v3)` with `v1` the midsagittal-normal axis,
//! stored v1-major (`v1` slowest). All operations are pure; volumes are
//! immutable after construction.

mod io;
mod ops;
mod render;
mod split;

pub use io::{read_image, read_volume, read_volume_bin, read_volume_f32, write_image, write_volume, AnyVolume};
pub use ops::{binarize, extract_patch_2d, extract_patch_3d, integrate_midsagittal};
pub use render::{render_illuminated, ViewDir};
pub use split::split_mandible;

use crate::{CoreError, Result};

/// 3D scalar intensity grid with physical per-axis spacing in mm.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelVolume {
    pub dims: [usize; 3],
    pub spacing_mm: [f64; 3],
    pub data: Vec<f32>,
}

/// 3D {0,1} grid with the same layout as [`VoxelVolume`].
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryVolume {
    pub dims: [usize; 3],
    pub spacing_mm: [f64; 3],
    pub data: Vec<u8>,
}

/// 2D real-valued image, first-dim-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image2D {
    pub dims: [usize; 2],
    pub spacing_mm: [f64; 2],
    pub data: Vec<f64>,
}

/// Fully materialized cube of side `eta` cut out of a volume; out-of-bounds
/// voxels are zero-filled.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch3D {
    pub eta: usize,
    /// Voxel coordinate the patch was centered on (may lie outside the volume).
    pub center: [i64; 3],
    pub data: Vec<f64>,
}

/// 2D analogue of [`Patch3D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Patch2D {
    pub eta: usize,
    pub center: [i64; 2],
    pub data: Vec<f64>,
}

fn check_dims_spacing(dims: &[usize], spacing: &[f64]) -> Result<()> {
    if dims.iter().any(|&d| d == 0) {
        return Err(CoreError::Volume(format!("zero dimension in {dims:?}")));
    }
    if spacing.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(CoreError::Volume(format!("non-positive spacing {spacing:?}")));
    }
    Ok(())
}

impl VoxelVolume {
    pub fn new(dims: [usize; 3], spacing_mm: [f64; 3], data: Vec<f32>) -> Result<Self> {
        check_dims_spacing(&dims, &spacing_mm)?;
        if data.len() != dims[0] * dims[1] * dims[2] {
            return Err(CoreError::Volume(format!(
                "data length {} != {}x{}x{}",
                data.len(),
                dims[0],
                dims[1],
                dims[2]
            )));
        }
        Ok(Self { dims, spacing_mm, data })
    }

    pub fn zeros(dims: [usize; 3], spacing_mm: [f64; 3]) -> Result<Self> {
        let n = dims[0] * dims[1] * dims[2];
        Self::new(dims, spacing_mm, vec![0.0; n])
    }

    #[inline]
    pub fn idx(&self, v1: usize, v2: usize, v3: usize) -> usize {
        (v1 * self.dims[1] + v2) * self.dims[2] + v3
    }

    #[inline]
    pub fn get(&self, v1: usize, v2: usize, v3: usize) -> f32 {
        self.data[self.idx(v1, v2, v3)]
    }
}

impl BinaryVolume {
    pub fn new(dims: [usize; 3], spacing_mm: [f64; 3], data: Vec<u8>) -> Result<Self> {
        check_dims_spacing(&dims, &spacing_mm)?;
        if data.len() != dims[0] * dims[1] * dims[2] {
            return Err(CoreError::Volume(format!(
                "data length {} != volume size",
                data.len()
            )));
        }
        if data.iter().any(|&v| v > 1) {
            return Err(CoreError::Volume("binary volume with value > 1".into()));
        }
        Ok(Self { dims, spacing_mm, data })
    }

    pub fn zeros(dims: [usize; 3], spacing_mm: [f64; 3]) -> Result<Self> {
        let n = dims[0] * dims[1] * dims[2];
        Self::new(dims, spacing_mm, vec![0u8; n])
    }

    #[inline]
    pub fn idx(&self, v1: usize, v2: usize, v3: usize) -> usize {
        (v1 * self.dims[1] + v2) * self.dims[2] + v3
    }

    #[inline]
    pub fn get(&self, v1: usize, v2: usize, v3: usize) -> u8 {
        self.data[self.idx(v1, v2, v3)]
    }

    #[inline]
    pub fn get_i64(&self, v: [i64; 3]) -> u8 {
        if v[0] < 0 || v[1] < 0 || v[2] < 0 {
            return 0;
        }
        let (a, b, c) = (v[0] as usize, v[1] as usize, v[2] as usize);
        if a >= self.dims[0] || b >= self.dims[1] || c >= self.dims[2] {
            0
        } else {
            self.get(a, b, c)
        }
    }

    pub fn count_foreground(&self) -> usize {
        self.data.iter().map(|&v| v as usize).sum()
    }
}

impl Image2D {
    pub fn new(dims: [usize; 2], spacing_mm: [f64; 2], data: Vec<f64>) -> Result<Self> {
        check_dims_spacing(&dims, &spacing_mm)?;
        if data.len() != dims[0] * dims[1] {
            return Err(CoreError::Volume(format!(
                "data length {} != {}x{}",
                data.len(),
                dims[0],
                dims[1]
            )));
        }
        Ok(Self { dims, spacing_mm, data })
    }

    pub fn zeros(dims: [usize; 2], spacing_mm: [f64; 2]) -> Result<Self> {
        Self::new(dims, spacing_mm, vec![0.0; dims[0] * dims[1]])
    }

    #[inline]
    pub fn idx(&self, u: usize, v: usize) -> usize {
        u * self.dims[1] + v
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[self.idx(u, v)]
    }
}

impl Patch3D {
    /// Patch (0,0,0) corner in volume voxel coordinates; the center sits at
    /// patch index `eta/2` (floor convention).
    pub fn corner(&self) -> [i64; 3] {
        let h = (self.eta / 2) as i64;
        [self.center[0] - h, self.center[1] - h, self.center[2] - h]
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.eta + j) * self.eta + k
    }
}

impl Patch2D {
    pub fn corner(&self) -> [i64; 2] {
        let h = (self.eta / 2) as i64;
        [self.center[0] - h, self.center[1] - h]
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.eta + j
    }
}
