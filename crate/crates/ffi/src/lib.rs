//! C ABI over `mamseg`.
//!
//! Images and masks are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`MamsegStatus`]; on failure
//! [`mamseg_last_error`] describes the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mamseg::eval::{overlap, run_method, screening_metrics, EvalError, Method, MethodConfig};
use mamseg::features::{extract_from_mask, FeatureError};
use mamseg::imgio::parse_pgm;
use mamseg::segmentation::SegError;
use mamseg::{ConfusionMatrix, Image, Mask};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MamsegStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidImage = 3,
    SeedOutOfBounds = 4,
    NoContrast = 5,
    SegmentationFailed = 6,
    FeatureFailed = 7,
    DimensionMismatch = 8,
    EmptyOverlap = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MamsegMethod {
    Saliency = 0,
    RegionGrowing = 1,
    ActiveContour = 2,
}

/// Opaque image handle.
pub struct MamsegImage(Image);

/// Opaque mask handle.
pub struct MamsegMask(Mask);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MamsegFeatures {
    pub radius: f64,
    pub perimeter: f64,
    pub area: f64,
    pub compactness: f64,
    pub smoothness: f64,
    pub symmetry: f64,
    pub fractal_dimension: f64,
    pub texture: f64,
}

/// `hausdorff` is NaN when exactly one mask is empty.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MamsegOverlap {
    pub dice: f64,
    pub jaccard: f64,
    pub hausdorff: f64,
}

/// Undefined rates (zero denominator) are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MamsegScreening {
    pub sensitivity: f64,
    pub specificity: f64,
    pub fnr: f64,
    pub accuracy: f64,
    pub precision: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(MamsegStatus, String);

impl From<SegError> for Failure {
    fn from(e: SegError) -> Self {
        let status = match e {
            SegError::SeedOutOfBounds { .. } => MamsegStatus::SeedOutOfBounds,
            SegError::NoContrast => MamsegStatus::NoContrast,
            SegError::DimensionMismatch => MamsegStatus::DimensionMismatch,
            SegError::InvalidParams(_) => MamsegStatus::InvalidArgument,
            _ => MamsegStatus::SegmentationFailed,
        };
        Failure(status, e.to_string())
    }
}

impl From<FeatureError> for Failure {
    fn from(e: FeatureError) -> Self {
        let status = match e {
            FeatureError::DimensionMismatch { .. } => MamsegStatus::DimensionMismatch,
            _ => MamsegStatus::FeatureFailed,
        };
        Failure(status, e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        let status = match e {
            EvalError::DimensionMismatch { .. } => MamsegStatus::DimensionMismatch,
            EvalError::BothEmpty => MamsegStatus::EmptyOverlap,
            _ => MamsegStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MamsegStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic for [`mamseg_last_error`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MamsegStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MamsegStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MamsegStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn mamseg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn mamseg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `width * height` row-major samples into a new image.
///
/// # Safety
/// `pixels` must point to `width * height` readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mamseg_image_new(
    width: usize,
    height: usize,
    max_gray: u16,
    pixels: *const u16,
    out: *mut *mut MamsegImage,
) -> MamsegStatus {
    guard(|| {
        if pixels.is_null() {
            return Err(null("pixels"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let n = width
            .checked_mul(height)
            .ok_or_else(|| Failure(MamsegStatus::InvalidImage, "dimensions overflow".into()))?;
        let data = std::slice::from_raw_parts(pixels, n).to_vec();
        let image = Image::new(width, height, max_gray, data)
            .map_err(|e| Failure(MamsegStatus::InvalidImage, e.to_string()))?;
        *out = Box::into_raw(Box::new(MamsegImage(image)));
        Ok(())
    })
}

/// Parses a P2 or P5 PGM buffer.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mamseg_image_from_pgm(
    bytes: *const u8,
    len: usize,
    out: *mut *mut MamsegImage,
) -> MamsegStatus {
    guard(|| {
        if bytes.is_null() {
            return Err(null("bytes"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let image = parse_pgm(std::slice::from_raw_parts(bytes, len))
            .map_err(|e| Failure(MamsegStatus::InvalidImage, e.to_string()))?;
        *out = Box::into_raw(Box::new(MamsegImage(image)));
        Ok(())
    })
}

/// # Safety
/// `image` must come from this library and not be freed twice. Null is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn mamseg_image_free(image: *mut MamsegImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// # Safety
/// `image` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mamseg_image_width(image: *const MamsegImage) -> usize {
    image.as_ref().map_or(0, |i| i.0.width())
}

/// # Safety
/// `image` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mamseg_image_height(image: *const MamsegImage) -> usize {
    image.as_ref().map_or(0, |i| i.0.height())
}

/// New mask from `width * height` bytes, non-zero meaning inside.
///
/// # Safety
/// `bits` must point to `width * height` readable bytes; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mamseg_mask_new(
    width: usize,
    height: usize,
    bits: *const u8,
    out: *mut *mut MamsegMask,
) -> MamsegStatus {
    guard(|| {
        if bits.is_null() {
            return Err(null("bits"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let n = width
            .checked_mul(height)
            .ok_or_else(|| Failure(MamsegStatus::InvalidArgument, "dimensions overflow".into()))?;
        let data = std::slice::from_raw_parts(bits, n).iter().map(|&b| b != 0).collect();
        let mask = Mask::from_bits(width, height, data)?;
        *out = Box::into_raw(Box::new(MamsegMask(mask)));
        Ok(())
    })
}

/// # Safety
/// `mask` must come from this library and not be freed twice. Null is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn mamseg_mask_free(mask: *mut MamsegMask) {
    if !mask.is_null() {
        drop(Box::from_raw(mask));
    }
}

/// # Safety
/// `mask` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mamseg_mask_width(mask: *const MamsegMask) -> usize {
    mask.as_ref().map_or(0, |m| m.0.width())
}

/// # Safety
/// `mask` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mamseg_mask_height(mask: *const MamsegMask) -> usize {
    mask.as_ref().map_or(0, |m| m.0.height())
}

/// Number of set pixels.
///
/// # Safety
/// `mask` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn mamseg_mask_count(mask: *const MamsegMask) -> usize {
    mask.as_ref().map_or(0, |m| m.0.count())
}

/// Writes the mask as `width * height` bytes, 1 inside and 0 outside.
///
/// # Safety
/// `out` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mamseg_mask_copy(
    mask: *const MamsegMask,
    out: *mut u8,
    len: usize,
) -> MamsegStatus {
    guard(|| {
        let m = &as_ref(mask, "mask")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        if len != m.bits().len() {
            return Err(Failure(
                MamsegStatus::InvalidArgument,
                format!("buffer holds {len} bytes, mask has {}", m.bits().len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, len);
        for (d, &b) in dst.iter_mut().zip(m.bits()) {
            *d = b as u8;
        }
        Ok(())
    })
}

/// Segments from a seed with default settings.
///
/// # Safety
/// `image` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mamseg_segment(
    image: *const MamsegImage,
    seed_x: usize,
    seed_y: usize,
    method: MamsegMethod,
    out: *mut *mut MamsegMask,
) -> MamsegStatus {
    guard(|| {
        let img = &as_ref(image, "image")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let method = match method {
            MamsegMethod::Saliency => Method::Saliency,
            MamsegMethod::RegionGrowing => Method::RegionGrowing,
            MamsegMethod::ActiveContour => Method::ActiveContour,
        };
        let mask = run_method(img, (seed_x, seed_y), method, &MethodConfig::default())?;
        *out = Box::into_raw(Box::new(MamsegMask(mask)));
        Ok(())
    })
}

/// Shape and texture features of the mask's largest component.
///
/// # Safety
/// `image` and `mask` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mamseg_features(
    image: *const MamsegImage,
    mask: *const MamsegMask,
    out: *mut MamsegFeatures,
) -> MamsegStatus {
    guard(|| {
        let img = &as_ref(image, "image")?.0;
        let m = &as_ref(mask, "mask")?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = extract_from_mask(img, m)?;
        *out = MamsegFeatures {
            radius: f.radius,
            perimeter: f.perimeter,
            area: f.area,
            compactness: f.compactness,
            smoothness: f.smoothness,
            symmetry: f.symmetry,
            fractal_dimension: f.fractal_dimension,
            texture: f.texture,
        };
        Ok(())
    })
}

/// Dice, Jaccard and boundary Hausdorff distance.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mamseg_overlap(
    a: *const MamsegMask,
    b: *const MamsegMask,
    out: *mut MamsegOverlap,
) -> MamsegStatus {
    guard(|| {
        let (ma, mb) = (&as_ref(a, "a")?.0, &as_ref(b, "b")?.0);
        if out.is_null() {
            return Err(null("out"));
        }
        let o = overlap(ma, mb)?;
        *out = MamsegOverlap {
            dice: o.dice,
            jaccard: o.jaccard,
            hausdorff: o.hausdorff.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Screening rates from confusion counts.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mamseg_screening(
    tp: usize,
    fp: usize,
    tn: usize,
    fn_: usize,
    out: *mut MamsegScreening,
) -> MamsegStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = screening_metrics(&ConfusionMatrix { tp, fp, tn, fn_ });
        let nan = |v: Option<f64>| v.unwrap_or(f64::NAN);
        *out = MamsegScreening {
            sensitivity: nan(m.sensitivity),
            specificity: nan(m.specificity),
            fnr: nan(m.fnr),
            accuracy: nan(m.accuracy),
            precision: nan(m.precision),
        };
        Ok(())
    })
}
