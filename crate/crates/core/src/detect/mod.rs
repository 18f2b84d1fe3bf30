//! Coarse-to-fine detectors: reference-landmark detection from illuminated
//! views, jittered patch dataset generation, 3D mandibular group detectors,
//! 2D midsagittal detectors, and cranial refinement.

pub mod dataset;
pub mod groups;
pub mod refine;
pub mod train;
pub mod views;

pub use dataset::{
    generate_patch_dataset_2d, generate_patch_dataset_3d, load_patch_dataset_3d,
    save_patch_dataset_3d, JitterSpec, PatchDataset2D, PatchDataset3D, PatchSample2D,
    PatchSample3D,
};
pub use groups::{default_groups, validate_partition, DetectorGroup, PatchSource};
pub use refine::{detect_mandibular, refine_cranial, MandibularRefinement};
pub use train::{
    build_conv2_spec, build_conv3_spec, train_detector_2d, train_detector_3d, DetectorArch,
    DetectorModel, DetectorTrainConfig,
};
pub use views::{
    detect_reference_landmarks, reconstruct_3d, render_view_stack, train_view_models,
    ReferenceDetection, ViewConfig, ViewModel,
};
