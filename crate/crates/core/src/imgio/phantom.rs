//! Synthetic test images with exact ground-truth masks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Image, ImgError};
use crate::segmentation::Mask;

/// Shape rendered in the foreground. Coordinates are pixel centers, top-left
/// origin; `angle` is in radians, counter-clockwise from the x axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhantomShape {
    Disc {
        center: (f64, f64),
        radius: f64,
    },
    GaussianBlob {
        center: (f64, f64),
        sigma: f64,
    },
    Ellipse {
        center: (f64, f64),
        a: f64,
        b: f64,
        angle: f64,
    },
}

impl PhantomShape {
    pub fn center(&self) -> (f64, f64) {
        match *self {
            PhantomShape::Disc { center, .. }
            | PhantomShape::GaussianBlob { center, .. }
            | PhantomShape::Ellipse { center, .. } => center,
        }
    }

    /// Half extents of the shape's support along x and y.
    fn half_extent(&self) -> (f64, f64) {
        match *self {
            PhantomShape::Disc { radius, .. } => (radius, radius),
            PhantomShape::GaussianBlob { sigma, .. } => {
                let r = sigma * (2.0 * std::f64::consts::LN_2).sqrt();
                (r, r)
            }
            PhantomShape::Ellipse { a, b, angle, .. } => {
                let (s, c) = angle.sin_cos();
                (
                    (a * a * c * c + b * b * s * s).sqrt(),
                    (a * a * s * s + b * b * c * c).sqrt(),
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomSpec {
    pub width: usize,
    pub height: usize,
    pub shape: PhantomShape,
    pub fg_level: u16,
    pub bg_level: u16,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub rng_seed: u64,
    /// Defaults to 255.
    #[serde(default = "default_max_gray")]
    pub max_gray: u16,
}

fn default_max_gray() -> u16 {
    255
}

impl PhantomSpec {
    pub fn disc(size: usize, center: (f64, f64), radius: f64, fg: u16, bg: u16) -> Self {
        PhantomSpec {
            width: size,
            height: size,
            shape: PhantomShape::Disc { center, radius },
            fg_level: fg,
            bg_level: bg,
            noise_sigma: 0.0,
            rng_seed: 0,
            max_gray: 255,
        }
    }

    pub fn with_noise(mut self, sigma: f64, seed: u64) -> Self {
        self.noise_sigma = sigma;
        self.rng_seed = seed;
        self
    }

    fn validate(&self) -> Result<(), ImgError> {
        let bad = |m: String| Err(ImgError::Phantom(m));
        if self.width == 0 || self.height == 0 {
            return Err(ImgError::BadDimensions {
                width: self.width,
                height: self.height,
            });
        }
        if self.max_gray == 0 {
            return Err(ImgError::BadMaxGray(0));
        }
        if self.fg_level == self.bg_level {
            return bad("fg_level must differ from bg_level".into());
        }
        if self.fg_level > self.max_gray || self.bg_level > self.max_gray {
            return bad("fg_level and bg_level must not exceed max_gray".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise_sigma must be finite and >= 0, got {}", self.noise_sigma));
        }
        let positive = match self.shape {
            PhantomShape::Disc { radius, .. } => radius > 0.0,
            PhantomShape::GaussianBlob { sigma, .. } => sigma > 0.0,
            PhantomShape::Ellipse { a, b, angle, .. } => a > 0.0 && b > 0.0 && angle.is_finite(),
        };
        if !positive {
            return bad("shape size parameters must be positive".into());
        }
        let (cx, cy) = self.shape.center();
        let (ex, ey) = self.shape.half_extent();
        let fits = cx - ex >= 0.0
            && cy - ey >= 0.0
            && cx + ex <= (self.width - 1) as f64
            && cy + ey <= (self.height - 1) as f64;
        if !fits {
            return bad("shape does not fit within the image bounds".into());
        }
        Ok(())
    }
}

/// Foreground weight in [0, 1] at pixel (x, y), before quantisation.
fn weight(shape: &PhantomShape, x: f64, y: f64) -> f64 {
    match *shape {
        PhantomShape::Disc { center, radius } => {
            let (dx, dy) = (x - center.0, y - center.1);
            if dx * dx + dy * dy <= radius * radius {
                1.0
            } else {
                0.0
            }
        }
        PhantomShape::GaussianBlob { center, sigma } => {
            let (dx, dy) = (x - center.0, y - center.1);
            (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp()
        }
        PhantomShape::Ellipse {
            center,
            a,
            b,
            angle,
        } => {
            let (s, c) = angle.sin_cos();
            let (dx, dy) = (x - center.0, y - center.1);
            // Image y points down; rotate counter-clockwise as seen on screen.
            let u = dx * c - dy * s;
            let v = dx * s + dy * c;
            if (u * u) / (a * a) + (v * v) / (b * b) <= 1.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Renders the phantom and its ground-truth support. For the Gaussian blob the
/// support is the set of pixels at or above half of the peak contrast.
pub fn synth_phantom(spec: &PhantomSpec) -> Result<(Image, Mask), ImgError> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let fg = spec.fg_level as f64;
    let bg = spec.bg_level as f64;
    let half = (fg - bg).abs() / 2.0;
    let mut levels = Vec::with_capacity(w * h);
    let mut mask = Mask::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let intensity = bg + (fg - bg) * weight(&spec.shape, x as f64, y as f64);
            if (intensity - bg).abs() >= half {
                mask.set(x, y, true);
            }
            levels.push(intensity);
        }
    }
    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
        let normal = Normal::new(0.0, spec.noise_sigma)
            .map_err(|e| ImgError::Phantom(e.to_string()))?;
        for v in levels.iter_mut() {
            *v += normal.sample(&mut rng);
        }
    }
    let max = spec.max_gray as f64;
    let pixels = levels
        .into_iter()
        .map(|v| v.round().clamp(0.0, max) as u16)
        .collect();
    Ok((Image::new(w, h, spec.max_gray, pixels)?, mask))
}
