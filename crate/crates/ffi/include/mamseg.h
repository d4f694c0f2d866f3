#ifndef MAMSEG_H
#define MAMSEG_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MamsegStatus {
  MAMSEG_STATUS_OK = 0,
  MAMSEG_STATUS_NULL_POINTER = 1,
  MAMSEG_STATUS_INVALID_ARGUMENT = 2,
  MAMSEG_STATUS_INVALID_IMAGE = 3,
  MAMSEG_STATUS_SEED_OUT_OF_BOUNDS = 4,
  MAMSEG_STATUS_NO_CONTRAST = 5,
  MAMSEG_STATUS_SEGMENTATION_FAILED = 6,
  MAMSEG_STATUS_FEATURE_FAILED = 7,
  MAMSEG_STATUS_DIMENSION_MISMATCH = 8,
  MAMSEG_STATUS_EMPTY_OVERLAP = 9,
  MAMSEG_STATUS_PANIC = 10,
} MamsegStatus;

typedef enum MamsegMethod {
  MAMSEG_METHOD_SALIENCY = 0,
  MAMSEG_METHOD_REGION_GROWING = 1,
  MAMSEG_METHOD_ACTIVE_CONTOUR = 2,
} MamsegMethod;

/**
 * Opaque image handle.
 */
typedef struct MamsegImage MamsegImage;

/**
 * Opaque mask handle.
 */
typedef struct MamsegMask MamsegMask;

typedef struct MamsegFeatures {
  double radius;
  double perimeter;
  double area;
  double compactness;
  double smoothness;
  double symmetry;
  double fractal_dimension;
  double texture;
} MamsegFeatures;

/**
 * `hausdorff` is NaN when exactly one mask is empty.
 */
typedef struct MamsegOverlap {
  double dice;
  double jaccard;
  double hausdorff;
} MamsegOverlap;

/**
 * Undefined rates (zero denominator) are NaN.
 */
typedef struct MamsegScreening {
  double sensitivity;
  double specificity;
  double fnr;
  double accuracy;
  double precision;
} MamsegScreening;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *mamseg_last_error(void);

/**
 * Library version, static storage.
 */
const char *mamseg_version(void);

/**
 * Copies `width * height` row-major samples into a new image.
 *
 * # Safety
 * `pixels` must point to `width * height` readable values; `out` must be
 * writable.
 */
enum MamsegStatus mamseg_image_new(size_t width,
                                   size_t height,
                                   uint16_t max_gray,
                                   const uint16_t *pixels,
                                   struct MamsegImage **out);

/**
 * Parses a P2 or P5 PGM buffer.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes; `out` must be writable.
 */
enum MamsegStatus mamseg_image_from_pgm(const uint8_t *bytes, size_t len, struct MamsegImage **out);

/**
 * # Safety
 * `image` must come from this library and not be freed twice. Null is a
 * no-op.
 */
void mamseg_image_free(struct MamsegImage *image);

/**
 * # Safety
 * `image` must be a live handle or null (returns 0).
 */
size_t mamseg_image_width(const struct MamsegImage *image);

/**
 * # Safety
 * `image` must be a live handle or null (returns 0).
 */
size_t mamseg_image_height(const struct MamsegImage *image);

/**
 * New mask from `width * height` bytes, non-zero meaning inside.
 *
 * # Safety
 * `bits` must point to `width * height` readable bytes; `out` must be
 * writable.
 */
enum MamsegStatus mamseg_mask_new(size_t width,
                                  size_t height,
                                  const uint8_t *bits,
                                  struct MamsegMask **out);

/**
 * # Safety
 * `mask` must come from this library and not be freed twice. Null is a
 * no-op.
 */
void mamseg_mask_free(struct MamsegMask *mask);

/**
 * # Safety
 * `mask` must be a live handle or null (returns 0).
 */
size_t mamseg_mask_width(const struct MamsegMask *mask);

/**
 * # Safety
 * `mask` must be a live handle or null (returns 0).
 */
size_t mamseg_mask_height(const struct MamsegMask *mask);

/**
 * Number of set pixels.
 *
 * # Safety
 * `mask` must be a live handle or null (returns 0).
 */
size_t mamseg_mask_count(const struct MamsegMask *mask);

/**
 * Writes the mask as `width * height` bytes, 1 inside and 0 outside.
 *
 * # Safety
 * `out` must point to `len` writable bytes.
 */
enum MamsegStatus mamseg_mask_copy(const struct MamsegMask *mask, uint8_t *out, size_t len);

/**
 * Segments from a seed with default settings.
 *
 * # Safety
 * `image` must be a live handle; `out` must be writable.
 */
enum MamsegStatus mamseg_segment(const struct MamsegImage *image,
                                 size_t seed_x,
                                 size_t seed_y,
                                 enum MamsegMethod method,
                                 struct MamsegMask **out);

/**
 * Shape and texture features of the mask's largest component.
 *
 * # Safety
 * `image` and `mask` must be live handles; `out` must be writable.
 */
enum MamsegStatus mamseg_features(const struct MamsegImage *image,
                                  const struct MamsegMask *mask,
                                  struct MamsegFeatures *out);

/**
 * Dice, Jaccard and boundary Hausdorff distance.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum MamsegStatus mamseg_overlap(const struct MamsegMask *a,
                                 const struct MamsegMask *b,
                                 struct MamsegOverlap *out);

/**
 * Screening rates from confusion counts.
 *
 * # Safety
 * `out` must be writable.
 */
enum MamsegStatus mamseg_screening(size_t tp,
                                   size_t fp,
                                   size_t tn,
                                   size_t fn_,
                                   struct MamsegScreening *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAMSEG_H */
