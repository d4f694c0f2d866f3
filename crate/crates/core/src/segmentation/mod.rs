//! Seeded mass segmentation: the saliency pipeline and its two baselines.

mod contour;
mod gradient;
mod grow;
mod mask;
mod pipeline;
mod saliency;
mod snake;

pub use contour::{Contour, Point};
pub use gradient::GradientField;
pub use grow::region_growing;
pub use mask::Mask;
pub use pipeline::{
    saliency_segment, saliency_segment_detailed, SaliencyConfig, SaliencySegmentation,
    ThresholdPolicy,
};
pub use saliency::{
    difference_histogram, otsu_threshold, partition_regions, saliency_lut, saliency_map,
    saliency_of_level, DifferenceHistogram, RegionPartition, SaliencyMap,
};
pub use snake::{
    active_contour, active_contour_traced, conservative_contour, conservative_contour_traced,
    ConservativeParams, SnakeOutcome, SnakeParams,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SegError {
    #[error("seed {seed:?} outside {width}x{height} image")]
    SeedOutOfBounds {
        seed: (usize, usize),
        width: usize,
        height: usize,
    },
    #[error("degenerate contour: {0}")]
    DegenerateContour(String),
    #[error("NoContrast: no gradient to expand against around the seed")]
    NoContrast,
    #[error("contour encloses no interior pixels")]
    EmptyInterior,
    #[error("{0} region is empty")]
    EmptyRegion(&'static str),
    #[error("mask is empty")]
    EmptyMask,
    #[error("SegmentationFailed: {0}")]
    SegmentationFailed(String),
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
