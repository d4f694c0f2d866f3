//! File output: atomic writes, overlays, SVG contours.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::imgio::Image;
use crate::segmentation::Mask;

/// Writes via a temporary file in the target directory and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// `dir/name`, relative to the default output directory when `dir` is not
/// given.
pub fn out_path(dir: &Option<PathBuf>, name: &str) -> PathBuf {
    let base = dir.clone().unwrap_or_else(default_out_dir);
    base.join(name)
}

/// `$MAMSEG_OUT_DIR`, else the working directory.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os("MAMSEG_OUT_DIR")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// File stem used to name derived artifacts.
pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

/// Copy of `image` with the mask boundary burned in at `max_gray`.
pub fn overlay(image: &Image, mask: &Mask) -> Image {
    let edge = mask.boundary();
    let max = image.max_gray();
    let pixels = image
        .pixels()
        .iter()
        .zip(edge.bits())
        .map(|(&p, &b)| if b { max } else { p })
        .collect();
    Image::new(image.width(), image.height(), max, pixels).expect("same shape and range")
}

/// Outer boundary of the mask's largest component as an SVG polyline over
/// pixel centers.
pub fn svg(mask: &Mask) -> Option<String> {
    let contour = mask.largest_component().outer_contour().ok()?;
    let points: Vec<String> = contour
        .points()
        .iter()
        .map(|(x, y)| format!("{}.5,{}.5", x, y))
        .collect();
    let (w, h) = (mask.width(), mask.height());
    Some(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <polygon points=\"{}\" fill=\"none\" stroke=\"red\" stroke-width=\"1\"/>\n</svg>\n",
        points.join(" ")
    ))
}
