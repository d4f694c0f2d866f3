//! Seeded mass segmentation and radiomic analysis for mammography.
//!
//! The crate is organised around the processing chain:
//!
//! * [`imgio`] reads and writes PGM rasters and MIAS-style annotation files,
//!   and renders synthetic phantoms with known ground truth.
//! * [`segmentation`] holds the saliency-driven segmentation pipeline and the
//!   region-growing and greedy active-contour baselines.
//! * [`features`] measures the eight shape/texture descriptors of a mass.
//! * [`learn`] trains and applies the classical classifiers and clusterers.
//! * [`eval`] scores predictions (screening metrics) and masks (overlap).
//! * [`cli`] wires everything into the `mamseg` command-line tool.

pub mod cli;
pub mod eval;
pub mod features;
pub mod imgio;
pub mod learn;
pub mod segmentation;


pub use imgio::{Annotation, Image, PhantomSpec};
pub use segmentation::{Contour, Mask, RegionPartition};
pub use features::FeatureVector;
pub use eval::{ConfusionMatrix, OverlapReport, OverlapRow, ScreeningMetrics};

/// Version tag written into every JSON document produced by the crate.
pub const SCHEMA_VERSION: u32 = 1;
