//! Region partition around a bootstrap contour and histogram-contrast
//! saliency over the border annulus.

use super::{Contour, Mask, SegError};
use crate::imgio::Image;

/// Three concentric zones around the bootstrap contour's centroid:
/// central (`d <= d_max`), border (`d_max < d <= 2 d_max`) and surround
/// (`2 d_max < d <= 4 d_max`), clipped to the image.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionPartition {
    pub centroid: (f64, f64),
    pub d_max: f64,
    pub central: Mask,
    pub border: Mask,
    pub surround: Mask,
}

pub fn partition_regions(
    contour: &Contour,
    width: usize,
    height: usize,
) -> Result<RegionPartition, SegError> {
    let region = contour.fill(width, height);
    let mut chain = Mask::new(width, height);
    for &(x, y) in contour.points() {
        if x >= 0 && y >= 0 && (x as usize) < width && (y as usize) < height {
            chain.set(x as usize, y as usize, true);
        }
    }
    if region.bits().iter().zip(chain.bits()).all(|(r, c)| !r || *c) {
        return Err(SegError::EmptyInterior);
    }
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0.0);
    for (x, y) in region.iter_set() {
        sx += x as f64;
        sy += y as f64;
        n += 1.0;
    }
    let (cx, cy) = (sx / n, sy / n);
    let d_max_sq = contour
        .points()
        .iter()
        .map(|&(x, y)| (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2))
        .fold(0.0, f64::max);
    if d_max_sq <= 0.0 {
        return Err(SegError::EmptyInterior);
    }
    let (mut central, mut border, mut surround) = (
        Mask::new(width, height),
        Mask::new(width, height),
        Mask::new(width, height),
    );
    for y in 0..height {
        for x in 0..width {
            let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
            if d2 <= d_max_sq {
                central.set(x, y, true);
            } else if d2 <= 4.0 * d_max_sq {
                border.set(x, y, true);
            } else if d2 <= 16.0 * d_max_sq {
                surround.set(x, y, true);
            }
        }
    }
    Ok(RegionPartition {
        centroid: (cx, cy),
        d_max: d_max_sq.sqrt(),
        central,
        border,
        surround,
    })
}

/// Reference color distribution for the saliency sum: the part of the
/// border histogram not explained by the surrounding tissue.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceHistogram {
    /// One probability per gray shade `0..=max_gray`; sums to 1.
    pub f: Vec<f64>,
    /// True when the border and surround histograms cancelled out and the
    /// border histogram itself was used.
    pub fallback: bool,
}

pub(crate) fn normalized_histogram(image: &Image, mask: &Mask) -> Vec<f64> {
    let mut h = vec![0.0; image.shades()];
    let mut n = 0usize;
    for (x, y) in mask.iter_set() {
        h[image.get(x, y) as usize] += 1.0;
        n += 1;
    }
    h.iter_mut().for_each(|v| *v /= n as f64);
    h
}

pub fn difference_histogram(
    image: &Image,
    partition: &RegionPartition,
) -> Result<DifferenceHistogram, SegError> {
    if partition.border.is_empty() {
        return Err(SegError::EmptyRegion("border"));
    }
    if partition.surround.is_empty() {
        return Err(SegError::EmptyRegion("surround"));
    }
    let hb = normalized_histogram(image, &partition.border);
    let hs = normalized_histogram(image, &partition.surround);
    let mut f: Vec<f64> = hb.iter().zip(&hs).map(|(b, s)| (b - s).max(0.0)).collect();
    let total: f64 = f.iter().sum();
    if total > 0.0 {
        f.iter_mut().for_each(|v| *v /= total);
        Ok(DifferenceHistogram { f, fallback: false })
    } else {
        Ok(DifferenceHistogram {
            f: hb,
            fallback: true,
        })
    }
}

/// Saliency of gray level `c`: the f-weighted mean normalised gray distance
/// to every shade. Zero-weight shades are skipped, which does not change the
/// sum.
pub fn saliency_of_level(f: &[f64], c: u16, max_gray: u16) -> f64 {
    let mut s = 0.0;
    for (j, &fj) in f.iter().enumerate() {
        if fj != 0.0 {
            s += fj * ((c as i64 - j as i64).unsigned_abs() as f64 / max_gray as f64);
        }
    }
    s.min(1.0)
}

/// Per-gray-level lookup table, filled only for the levels requested.
pub fn saliency_lut(f: &[f64], max_gray: u16, levels: impl IntoIterator<Item = u16>) -> Vec<Option<f64>> {
    let mut lut = vec![None; max_gray as usize + 1];
    for c in levels {
        let slot = &mut lut[c as usize];
        if slot.is_none() {
            *slot = Some(saliency_of_level(f, c, max_gray));
        }
    }
    lut
}

/// Saliency values on the border-region pixels; `None` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    values: Vec<Option<f64>>,
}

impl SaliencyMap {
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        self.values[y * self.width + x]
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn defined(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }
}

pub fn saliency_map(
    image: &Image,
    f: &DifferenceHistogram,
    partition: &RegionPartition,
) -> Result<SaliencyMap, SegError> {
    if f.f.len() != image.shades() {
        return Err(SegError::InvalidParams(format!(
            "histogram has {} bins, image has {} shades",
            f.f.len(),
            image.shades()
        )));
    }
    if partition.border.width() != image.width() || partition.border.height() != image.height() {
        return Err(SegError::DimensionMismatch);
    }
    let levels = partition.border.iter_set().map(|(x, y)| image.get(x, y));
    let lut = saliency_lut(&f.f, image.max_gray(), levels);
    let mut values = vec![None; image.width() * image.height()];
    for (x, y) in partition.border.iter_set() {
        values[y * image.width() + x] = lut[image.get(x, y) as usize];
    }
    Ok(SaliencyMap {
        width: image.width(),
        height: image.height(),
        values,
    })
}

/// Otsu threshold on raw values: maximises between-class variance over all
/// splits between distinct sorted values. Class 0 is `v <= threshold`.
/// Returns `None` when all values are equal.
pub fn otsu_threshold(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let total: f64 = v.iter().sum();
    let mut best: Option<(f64, f64)> = None;
    let mut acc = 0.0;
    for k in 1..v.len() {
        acc += v[k - 1];
        if v[k] == v[k - 1] {
            continue;
        }
        let w0 = k as f64 / n;
        let w1 = 1.0 - w0;
        let mu0 = acc / k as f64;
        let mu1 = (total - acc) / (v.len() - k) as f64;
        let between = w0 * w1 * (mu0 - mu1).powi(2);
        if best.is_none_or(|(b, _)| between > b) {
            best = Some((between, v[k - 1]));
        }
    }
    best.map(|(_, t)| t)
}
