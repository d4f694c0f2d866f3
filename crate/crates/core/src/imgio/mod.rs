//! Image, annotation and phantom I/O.

mod annotation;
mod phantom;
mod pgm;

pub use annotation::{
    parse_annotations, Abnormality, Annotation, CoordinateOrigin, Severity, Tissue,
};
pub use phantom::{synth_phantom, PhantomShape, PhantomSpec};
pub use pgm::{parse_pgm, write_pgm, PgmVariant};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImgError {
    #[error("malformed PGM magic number: expected P2 or P5")]
    BadMagic,
    #[error("malformed PGM header: {0}")]
    BadHeader(String),
    #[error("image dimensions must be positive, got {width}x{height}")]
    BadDimensions { width: usize, height: usize },
    #[error("max gray value {0} outside 1..=65535")]
    BadMaxGray(u64),
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("pixel value {value} at index {index} exceeds max gray {max_gray}")]
    PixelOutOfRange { index: usize, value: u64, max_gray: u16 },
    #[error("annotation line {line}: {message}")]
    Annotation { line: usize, message: String },
    #[error("invalid phantom: {0}")]
    Phantom(String),
}

/// Single-channel raster, row-major, top-left origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    max_gray: u16,
    pixels: Vec<u16>,
}

impl Image {
    pub fn new(
        width: usize,
        height: usize,
        max_gray: u16,
        pixels: Vec<u16>,
    ) -> Result<Self, ImgError> {
        if width == 0 || height == 0 {
            return Err(ImgError::BadDimensions { width, height });
        }
        if max_gray == 0 {
            return Err(ImgError::BadMaxGray(0));
        }
        let expected = width * height;
        if pixels.len() != expected {
            return Err(ImgError::Truncated {
                expected,
                found: pixels.len(),
            });
        }
        if let Some((index, &value)) = pixels.iter().enumerate().find(|(_, &v)| v > max_gray) {
            return Err(ImgError::PixelOutOfRange {
                index,
                value: value as u64,
                max_gray,
            });
        }
        Ok(Image {
            width,
            height,
            max_gray,
            pixels,
        })
    }

    /// Constant image.
    pub fn filled(width: usize, height: usize, max_gray: u16, level: u16) -> Result<Self, ImgError> {
        Image::new(width, height, max_gray, vec![level; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn max_gray(&self) -> u16 {
        self.max_gray
    }

    /// Number of representable gray shades, `max_gray + 1`.
    pub fn shades(&self) -> usize {
        self.max_gray as usize + 1
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Returns a copy with `f` applied to every pixel; `max_gray` may change.
    pub fn map(&self, max_gray: u16, f: impl Fn(u16) -> u16) -> Result<Image, ImgError> {
        Image::new(
            self.width,
            self.height,
            max_gray,
            self.pixels.iter().map(|&p| f(p)).collect(),
        )
    }
}
