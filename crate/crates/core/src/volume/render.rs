//! Depth-map Lambertian rendering of binarized volumes.
//!
//! For each ray along the view axis the first surface voxel gives a depth
//! map; the outward surface normal is estimated by central differences of
//! that depth map and shaded against a directional light. This is the
//! cheapest renderer that gives the 2D views strong geometric cues.

use super::{BinaryVolume, Image2D};
use crate::geom::{self, Vec3};
use crate::{CoreError, Result};

/// Orthographic view direction: the camera sits on the positive or negative
/// side of `axis` and looks along it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ViewDir {
    /// Volume axis index (0 = v1, 1 = v2, 2 = v3).
    pub axis: usize,
    /// Camera on the high-index side, rays travel toward low indices.
    pub from_positive: bool,
}

impl ViewDir {
    pub fn new(axis: usize, from_positive: bool) -> Self {
        assert!(axis < 3);
        Self { axis, from_positive }
    }

    /// Image axes (u, v) are the two non-view volume axes in ascending order.
    pub fn image_axes(&self) -> [usize; 2] {
        match self.axis {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    /// Unit ray direction (pointing away from the camera) in volume coords.
    pub fn ray_dir(&self) -> Vec3 {
        let mut d = [0.0; 3];
        d[self.axis] = if self.from_positive { -1.0 } else { 1.0 };
        d
    }

    /// The headlight direction: from the surface toward the camera.
    pub fn headlight(&self) -> Vec3 {
        geom::scale(self.ray_dir(), -1.0)
    }
}

/// Render a shaded orthographic view. Pixel = max(0, normal . light_dir) at
/// the first surface hit, 0 on background. `light_dir` points toward the
/// light source and must be non-zero (it is normalized internally).
pub fn render_illuminated(
    binvol: &BinaryVolume,
    view: ViewDir,
    light_dir: Vec3,
) -> Result<Image2D> {
    let light = geom::normalize(light_dir)
        .ok_or_else(|| CoreError::Volume("zero light vector".into()))?;

    let [ua, va] = view.image_axes();
    let n_u = binvol.dims[ua];
    let n_v = binvol.dims[va];
    let n_d = binvol.dims[view.axis];

    // Depth h(u,v): voxel distance from the camera entry plane to the first
    // foreground voxel, or None on a miss.
    let mut depth: Vec<Option<f64>> = vec![None; n_u * n_v];
    for u in 0..n_u {
        for v in 0..n_v {
            let mut coord = [0usize; 3];
            coord[ua] = u;
            coord[va] = v;
            let mut hit = None;
            for step in 0..n_d {
                let k = if view.from_positive { n_d - 1 - step } else { step };
                coord[view.axis] = k;
                if binvol.get(coord[0], coord[1], coord[2]) == 1 {
                    hit = Some(step as f64);
                    break;
                }
            }
            depth[u * n_v + v] = hit;
        }
    }

    let spacing_u = binvol.spacing_mm[ua];
    let spacing_v = binvol.spacing_mm[va];
    let spacing_d = binvol.spacing_mm[view.axis];

    // Central differences of the depth map in mm; one-sided at borders or
    // next to background pixels; zero slope when no neighbor is available.
    let slope = |h: &Vec<Option<f64>>, u: usize, v: usize, du: i64, dv: i64, sp: f64| -> f64 {
        let at = |uu: i64, vv: i64| -> Option<f64> {
            if uu < 0 || vv < 0 || uu as usize >= n_u || vv as usize >= n_v {
                None
            } else {
                h[uu as usize * n_v + vv as usize]
            }
        };
        let plus = at(u as i64 + du, v as i64 + dv);
        let minus = at(u as i64 - du, v as i64 - dv);
        let here = h[u * n_v + v].unwrap();
        match (minus, plus) {
            (Some(a), Some(b)) => (b - a) * spacing_d / (2.0 * sp),
            (None, Some(b)) => (b - here) * spacing_d / sp,
            (Some(a), None) => (here - a) * spacing_d / sp,
            (None, None) => 0.0,
        }
    };

    let ray = view.ray_dir();
    let mut out = vec![0.0f64; n_u * n_v];
    for u in 0..n_u {
        for v in 0..n_v {
            if depth[u * n_v + v].is_none() {
                continue;
            }
            let gu = slope(&depth, u, v, 1, 0, spacing_u);
            let gv = slope(&depth, u, v, 0, 1, spacing_v);
            // Height field h grows away from the camera, so the outward
            // (camera-facing) normal is (g_u, g_v, -1) in (u, v, ray) basis.
            let mut n = [0.0; 3];
            n[ua] = gu;
            n[va] = gv;
            n[0] -= ray[0];
            n[1] -= ray[1];
            n[2] -= ray[2];
            let n = geom::normalize(n).unwrap_or(geom::scale(ray, -1.0));
            out[u * n_v + v] = geom::dot(n, light).max(0.0);
        }
    }

    Image2D::new([n_u, n_v], [spacing_u, spacing_v], out)
}
