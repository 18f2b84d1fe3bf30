//! Coarse-to-fine 3D cephalometric landmark detection on CT-like voxel volumes.
//!
//! The pipeline stages are:
//!
//! 1. **Reference detection** — binarize the volume, render illuminated 2D
//!    views, and regress the 10 easy-to-find reference landmarks with small
//!    per-view CNNs, reconstructing 3D positions from orthogonal view pairs.
//! 2. **Local-to-global completion** — build a subject reference frame from
//!    five of the reference landmarks, normalize by cranial volume, and
//!    estimate all 90 landmarks from the 10 references through a
//!    VAE latent shape model composed with a learned reference-to-latent map.
//! 3. **Coarse-to-fine refinement** — split mandible from cranium, refine the
//!    42 non-reference mandibular landmarks with patch-based 3D CNNs (grouped
//!    detection, e.g. six condylar landmarks at once), refine the three
//!    midsagittal landmarks on a partially integrated 2D image with 2D CNNs,
//!    and re-estimate the remaining cranial landmarks with a dedicated
//!    cranial latent model.
//!
//! Because clinical CT datasets are restricted, the [`synth`] module provides
//! a seeded factor-model population of skull landmark configurations plus
//! matching voxel phantoms, giving every stage trainable data and every test
//! an exact ground truth.

pub mod detect;
pub mod geom;
pub mod landmarks;
pub mod nn;
pub mod pipeline;
pub mod synth;
pub mod vae;
pub mod volume;

mod error;

pub use error::CoreError;

/// Convenience alias used throughout the crate.
pub type Result<T, E = CoreError> = std::result::Result<T, E>;
