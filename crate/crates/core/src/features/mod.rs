//! Shape and texture descriptors of a segmented mass.
//!
//! Every measurement runs in coordinates relative to the region's bounding
//! box, so integer translations leave all results bit-identical.

mod csv;

pub use csv::{parse_feature_csv, write_feature_csv, FeatureRow, CSV_HEADER};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imgio::Image;
use crate::segmentation::{Contour, Mask, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("degenerate contour: {0}")]
    DegenerateContour(String),
    #[error("mask is empty")]
    EmptyMask,
    #[error("area is zero")]
    ZeroArea,
    #[error("mask has no spatial spread")]
    DegenerateMask,
    #[error("only {usable} usable box-counting scales, need 3")]
    TooFewScales { usable: usize },
    #[error("image is {image:?} but mask is {mask:?}")]
    DimensionMismatch {
        image: (usize, usize),
        mask: (usize, usize),
    },
    #[error("feature CSV line {line}: {message}")]
    Csv { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub radius: f64,
    pub perimeter: f64,
    pub area: f64,
    pub compactness: f64,
    pub smoothness: f64,
    pub symmetry: f64,
    pub fractal_dimension: f64,
    pub texture: f64,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 8] = [
        "radius",
        "perimeter",
        "area",
        "compactness",
        "smoothness",
        "symmetry",
        "fractal_dimension",
        "texture",
    ];

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.radius,
            self.perimeter,
            self.area,
            self.compactness,
            self.smoothness,
            self.symmetry,
            self.fractal_dimension,
            self.texture,
        ]
    }

    pub fn from_array(v: [f64; 8]) -> Self {
        FeatureVector {
            radius: v[0],
            perimeter: v[1],
            area: v[2],
            compactness: v[3],
            smoothness: v[4],
            symmetry: v[5],
            fractal_dimension: v[6],
            texture: v[7],
        }
    }
}

/// Distances from the region centroid to each contour point, in contour
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    /// Mean of the enclosed pixel coordinates, in image coordinates.
    pub centroid: (f64, f64),
    pub radial_lengths: Vec<f64>,
}

impl RadialProfile {
    pub fn mean(&self) -> f64 {
        self.radial_lengths.iter().sum::<f64>() / self.radial_lengths.len() as f64
    }
}

fn contour_origin(points: &[Point]) -> Point {
    points
        .iter()
        .fold((i64::MAX, i64::MAX), |(a, b), &(x, y)| (a.min(x), b.min(y)))
}

pub fn radial_profile(contour: &Contour) -> Result<RadialProfile, FeatureError> {
    let origin = contour_origin(contour.points());
    let local = contour.translate(-origin.0, -origin.1);
    let (w, h) = local
        .points()
        .iter()
        .fold((0, 0), |(a, b), &(x, y)| (a.max(x), b.max(y)));
    let region = local.fill(w as usize + 1, h as usize + 1);
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0.0);
    for (x, y) in region.iter_set() {
        sx += x as f64;
        sy += y as f64;
        n += 1.0;
    }
    let (cx, cy) = (sx / n, sy / n);
    let radial_lengths: Vec<f64> = local
        .points()
        .iter()
        .map(|&(x, y)| ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt())
        .collect();
    if radial_lengths.iter().any(|&r| r <= 0.0) {
        return Err(FeatureError::DegenerateContour(
            "a contour point coincides with the centroid".into(),
        ));
    }
    Ok(RadialProfile {
        centroid: (cx + origin.0 as f64, cy + origin.1 as f64),
        radial_lengths,
    })
}

/// Freeman chain length: 1 per axial step, √2 per diagonal step.
pub fn perimeter(contour: &Contour) -> f64 {
    let p = contour.points();
    let n = p.len();
    let diagonal = (0..n)
        .filter(|&i| {
            let (a, b) = (p[i], p[(i + 1) % n]);
            a.0 != b.0 && a.1 != b.1
        })
        .count();
    (n - diagonal) as f64 + diagonal as f64 * std::f64::consts::SQRT_2
}

/// Interior pixels plus half the boundary pixels. Boundary pixels are the
/// set pixels with a 4-neighbor outside the mask.
pub fn area(mask: &Mask) -> Result<f64, FeatureError> {
    let total = mask.count();
    if total == 0 {
        return Err(FeatureError::EmptyMask);
    }
    let boundary = mask.boundary().count();
    Ok((total - boundary) as f64 + boundary as f64 / 2.0)
}

pub fn compactness(perimeter: f64, area: f64) -> Result<f64, FeatureError> {
    if area <= 0.0 {
        return Err(FeatureError::ZeroArea);
    }
    Ok(perimeter * perimeter / area)
}

/// Mean absolute deviation of the radial lengths over their mean.
pub fn smoothness(profile: &RadialProfile) -> f64 {
    let mean = profile.mean();
    let mad = profile
        .radial_lengths
        .iter()
        .map(|r| (r - mean).abs())
        .sum::<f64>()
        / profile.radial_lengths.len() as f64;
    mad / mean
}

/// Set pixels shifted so the bounding box starts at the origin.
fn local_pixels(mask: &Mask) -> Result<Vec<(f64, f64)>, FeatureError> {
    let (x0, y0, _, _) = mask.bbox().ok_or(FeatureError::EmptyMask)?;
    Ok(mask
        .iter_set()
        .map(|(x, y)| ((x - x0) as f64, (y - y0) as f64))
        .collect())
}

/// Chord asymmetry about the major axis.
///
/// The major axis passes through the centroid along the principal direction
/// of the second-order central moments. Pixels are binned by their rounded
/// position along the axis; in each bin the chord on either side reaches the
/// farthest pixel's far edge, `max |v| + 0.5`. The result is
/// `Σ|L⁺ − L⁻| / Σ(L⁺ + L⁻)`, in `[0, 1]`.
pub fn symmetry(mask: &Mask) -> Result<f64, FeatureError> {
    let pts = local_pixels(mask)?;
    let n = pts.len() as f64;
    let (cx, cy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (cx, cy) = (cx / n, cy / n);
    let (mut m20, mut m02, mut m11) = (0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        let (dx, dy) = (x - cx, y - cy);
        m20 += dx * dx;
        m02 += dy * dy;
        m11 += dx * dy;
    }
    if m20 + m02 == 0.0 {
        return Err(FeatureError::DegenerateMask);
    }
    let theta = 0.5 * (2.0 * m11).atan2(m20 - m02);
    let (s, c) = theta.sin_cos();
    let mut bins: std::collections::BTreeMap<i64, (f64, f64)> = Default::default();
    for &(x, y) in &pts {
        let (dx, dy) = (x - cx, y - cy);
        let u = dx * c + dy * s;
        let v = -dx * s + dy * c;
        let e = bins.entry(u.round() as i64).or_insert((0.0, 0.0));
        if v >= 0.0 {
            e.0 = e.0.max(v + 0.5);
        }
        if v <= 0.0 {
            e.1 = e.1.max(-v + 0.5);
        }
    }
    let (diff, sum) = bins
        .values()
        .fold((0.0, 0.0), |(d, t), &(p, m)| (d + (p - m).abs(), t + p + m));
    Ok(diff / sum)
}

/// Box sizes used for the box-counting estimate.
pub const BOX_SIZES: [i64; 6] = [2, 4, 8, 16, 32, 64];

#[derive(Debug, Clone, PartialEq)]
pub struct FractalEstimate {
    /// Slope clamped to `[1, 2]`.
    pub dimension: f64,
    /// The raw slope before clamping.
    pub slope: f64,
    pub clamped: bool,
    /// `(box size, occupied boxes)` for every size that hit at least two
    /// boxes.
    pub counts: Vec<(i64, usize)>,
}

/// Box-counting dimension of a set of boundary pixels. Boxes are anchored at
/// the bounding box corner; a size whose boxes cover the set in one box
/// carries no information and is skipped.
pub fn box_counting(points: &[Point]) -> Result<FractalEstimate, FeatureError> {
    if points.is_empty() {
        return Err(FeatureError::TooFewScales { usable: 0 });
    }
    let origin = contour_origin(points);
    let mut counts = Vec::new();
    for &s in &BOX_SIZES {
        let mut boxes: Vec<(i64, i64)> = points
            .iter()
            .map(|&(x, y)| ((x - origin.0) / s, (y - origin.1) / s))
            .collect();
        boxes.sort_unstable();
        boxes.dedup();
        if boxes.len() >= 2 {
            counts.push((s, boxes.len()));
        }
    }
    if counts.len() < 3 {
        return Err(FeatureError::TooFewScales {
            usable: counts.len(),
        });
    }
    let xs: Vec<f64> = counts.iter().map(|&(s, _)| -(s as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&(_, n)| (n as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let dimension = slope.clamp(1.0, 2.0);
    Ok(FractalEstimate {
        dimension,
        slope,
        clamped: dimension != slope,
        counts,
    })
}

pub fn fractal_dimension(contour: &Contour) -> Result<FractalEstimate, FeatureError> {
    box_counting(contour.points())
}

/// Population variance of the gray values under the mask.
pub fn texture(image: &Image, mask: &Mask) -> Result<f64, FeatureError> {
    check_dims(image, mask)?;
    let values: Vec<f64> = mask
        .iter_set()
        .map(|(x, y)| image.get(x, y) as f64)
        .collect();
    if values.is_empty() {
        return Err(FeatureError::EmptyMask);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    Ok(values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n)
}

fn check_dims(image: &Image, mask: &Mask) -> Result<(), FeatureError> {
    if image.width() != mask.width() || image.height() != mask.height() {
        return Err(FeatureError::DimensionMismatch {
            image: (image.width(), image.height()),
            mask: (mask.width(), mask.height()),
        });
    }
    Ok(())
}

/// All eight descriptors. `contour` is the traced border of `mask`.
pub fn extract_all(
    image: &Image,
    mask: &Mask,
    contour: &Contour,
) -> Result<FeatureVector, FeatureError> {
    check_dims(image, mask)?;
    let profile = radial_profile(contour)?;
    let perimeter = perimeter(contour);
    let area = area(mask)?;
    Ok(FeatureVector {
        radius: profile.mean(),
        perimeter,
        area,
        compactness: compactness(perimeter, area)?,
        smoothness: smoothness(&profile),
        symmetry: symmetry(mask)?,
        fractal_dimension: fractal_dimension(contour)?.dimension,
        texture: texture(image, mask)?,
    })
}

/// Traces the largest component of `mask` and measures it.
pub fn extract_from_mask(image: &Image, mask: &Mask) -> Result<FeatureVector, FeatureError> {
    let region = mask.largest_component();
    let contour = region.outer_contour().map_err(|e| match e {
        crate::segmentation::SegError::EmptyMask => FeatureError::EmptyMask,
        other => FeatureError::DegenerateContour(other.to_string()),
    })?;
    extract_all(image, &region, &contour)
}
