//! The 90-landmark registry, landmark sets, reference-frame construction,
//! cranial-volume normalization, sub-vector selection, and error metrics.

mod csv_io;
mod frame;
mod metrics;
mod registry;
mod set;

pub use csv_io::{read_landmark_csv, write_landmark_csv};
pub use frame::{build_reference_frame, ReferenceFrame};
pub use metrics::{point_to_point_error, PointErrors};
pub use registry::{registry, Landmark, LandmarkRegistry, Location};
pub use set::{compute_cranial_volume, denormalize, normalize, LandmarkSet, NormalizationParams};

/// Well-known registry indices (1-based, as in the registry table).
pub mod idx {
    pub const ANS: usize = 1;
    pub const BREGMA: usize = 2;
    pub const CFM: usize = 3;
    pub const OR_L: usize = 4;
    pub const PO_L: usize = 5;
    pub const NA: usize = 6;
    pub const OR_R: usize = 7;
    pub const PO_R: usize = 8;
    pub const MXDML: usize = 24;
    pub const OD: usize = 25;
    pub const PNS: usize = 26;
    pub const MF_L: usize = 47;
    pub const MF_R: usize = 48;
}
