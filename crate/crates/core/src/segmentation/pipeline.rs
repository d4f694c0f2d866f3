use serde::{Deserialize, Serialize};

use super::saliency::{
    difference_histogram, otsu_threshold, partition_regions, saliency_lut, saliency_map,
    DifferenceHistogram, RegionPartition, SaliencyMap,
};
use super::snake::{conservative_contour, ConservativeParams};
use super::{Contour, Mask, SegError};
use crate::imgio::Image;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ThresholdPolicy {
    /// Otsu over the saliency of the central and border pixels.
    #[default]
    Otsu,
    Fixed { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SaliencyConfig {
    pub contour: ConservativeParams,
    pub threshold: ThresholdPolicy,
}

/// Every intermediate of a saliency segmentation run.
#[derive(Debug, Clone)]
pub struct SaliencySegmentation {
    pub mask: Mask,
    pub contour: Contour,
    pub partition: RegionPartition,
    pub histogram: DifferenceHistogram,
    pub saliency: SaliencyMap,
    pub threshold: f64,
    /// True when border pixels at or below the threshold were accepted.
    pub accept_low: bool,
}

pub fn saliency_segment(
    image: &Image,
    seed: (usize, usize),
    config: &SaliencyConfig,
) -> Result<Mask, SegError> {
    saliency_segment_detailed(image, seed, config).map(|s| s.mask)
}

/// Conservative contour, region partition, difference histogram, saliency,
/// threshold, then the seed's 4-connected component of
/// `central ∪ accepted border pixels`.
///
/// Border pixels are accepted on the same side of the threshold as the
/// median saliency of the central region, which is assumed to be mass.
pub fn saliency_segment_detailed(
    image: &Image,
    seed: (usize, usize),
    config: &SaliencyConfig,
) -> Result<SaliencySegmentation, SegError> {
    let (w, h) = (image.width(), image.height());
    if seed.0 >= w || seed.1 >= h {
        return Err(SegError::SeedOutOfBounds { seed, width: w, height: h });
    }
    let contour = conservative_contour(image, seed, &config.contour)?;
    let partition = partition_regions(&contour, w, h)?;
    let histogram = difference_histogram(image, &partition)?;
    let saliency = saliency_map(image, &histogram, &partition)?;

    let central_lut = saliency_lut(
        &histogram.f,
        image.max_gray(),
        partition.central.iter_set().map(|(x, y)| image.get(x, y)),
    );
    let mut central: Vec<f64> = partition
        .central
        .iter_set()
        .filter_map(|(x, y)| central_lut[image.get(x, y) as usize])
        .collect();
    central.sort_by(f64::total_cmp);
    let central_median = central.get(central.len() / 2).copied();

    let threshold = match config.threshold {
        ThresholdPolicy::Fixed { value } => value,
        ThresholdPolicy::Otsu => {
            let mut all = central.clone();
            all.extend(saliency.defined());
            otsu_threshold(&all).unwrap_or(f64::INFINITY)
        }
    };
    let accept_low = central_median.is_none_or(|m| m <= threshold);

    let mut union = partition.central.clone();
    for (x, y) in partition.border.iter_set() {
        if let Some(s) = saliency.get(x, y) {
            if (s <= threshold) == accept_low {
                union.set(x, y, true);
            }
        }
    }
    let mask = union.component(seed, false);
    if mask.is_empty() {
        return Err(SegError::SegmentationFailed(
            "seed is not part of the final region".into(),
        ));
    }
    Ok(SaliencySegmentation {
        mask,
        contour,
        partition,
        histogram,
        saliency,
        threshold,
        accept_low,
    })
}
