//! Subject reference frame from the five frame landmarks.
//!
//! Origin at CFM. The midsagittal plane is the least-squares plane through
//! {CFM, Bregma, Na} constrained to pass through the Po(L)/Po(R) midpoint
//! (so the porions sit symmetrically about it). v1 is the plane normal
//! oriented from Po(R) toward Po(L), v3 the component of Bregma - CFM
//! orthogonal to v1, v2 = v3 x v1.

use crate::geom::{self, Mat3, Vec3};
use crate::{CoreError, Result};

/// Rigid frame: rows of `axes` are the unit vectors v1 (midsagittal normal),
/// v2 (depth, anterior positive), v3 (height, superior positive).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReferenceFrame {
    pub origin: Vec3,
    pub axes: Mat3,
}

impl ReferenceFrame {
    pub fn identity() -> Self {
        Self {
            origin: [0.0; 3],
            axes: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// World -> frame coordinates.
    pub fn to_frame(&self, p: Vec3) -> Vec3 {
        geom::mat_vec(&self.axes, geom::sub(p, self.origin))
    }

    /// Frame -> world coordinates.
    pub fn to_world(&self, q: Vec3) -> Vec3 {
        geom::add(self.origin, geom::mat_t_vec(&self.axes, q))
    }
}

const COLLINEAR_TOL_RAD: f64 = 1e-6;

/// Build the reference frame from the five frame landmarks in world mm.
pub fn build_reference_frame(
    cfm: Vec3,
    bregma: Vec3,
    na: Vec3,
    po_l: Vec3,
    po_r: Vec3,
) -> Result<ReferenceFrame> {
    let up = geom::sub(bregma, cfm);
    let fwd = geom::sub(na, cfm);
    let up_n = geom::norm(up);
    let fwd_n = geom::norm(fwd);
    if up_n < 1e-9 || fwd_n < 1e-9 {
        return Err(CoreError::Degenerate("coincident frame landmarks".into()));
    }
    // Reject CFM, Bregma, Na collinear within angular tolerance.
    let sin_angle = geom::norm(geom::cross(up, fwd)) / (up_n * fwd_n);
    if sin_angle < COLLINEAR_TOL_RAD {
        return Err(CoreError::Degenerate(
            "CFM, Bregma, Na are collinear; midsagittal plane undefined".into(),
        ));
    }

    // Least-squares plane through the three midline points, constrained to
    // contain the porion midpoint: normal = smallest eigenvector of the
    // scatter of the midline points about that midpoint.
    let mid_po = geom::scale(geom::add(po_l, po_r), 0.5);
    let mut scatter = [[0.0f64; 3]; 3];
    for p in [cfm, bregma, na] {
        let d = geom::sub(p, mid_po);
        for i in 0..3 {
            for j in 0..3 {
                scatter[i][j] += d[i] * d[j];
            }
        }
    }
    let (_vals, vecs) = geom::sym_eigen_3x3(&scatter);
    let mut v1 = vecs[0];

    // Orient from Po(R) toward Po(L).
    let lr = geom::sub(po_l, po_r);
    if geom::norm(lr) < 1e-9 {
        return Err(CoreError::Degenerate("coincident porions".into()));
    }
    if geom::dot(v1, lr) < 0.0 {
        v1 = geom::scale(v1, -1.0);
    }
    if geom::dot(v1, lr).abs() < 1e-9 {
        return Err(CoreError::Degenerate(
            "porion axis lies in the midsagittal plane; v1 sign undefined".into(),
        ));
    }

    let up_perp = geom::sub(up, geom::scale(v1, geom::dot(up, v1)));
    let v3 = geom::normalize(up_perp).ok_or_else(|| {
        CoreError::Degenerate("Bregma - CFM is parallel to the midsagittal normal".into())
    })?;
    let v2 = geom::cross(v3, v1);

    Ok(ReferenceFrame { origin: cfm, axes: [v1, v2, v3] })
}
