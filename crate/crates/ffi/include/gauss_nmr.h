#ifndef GAUSS_NMR_H
#define GAUSS_NMR_H

/* Generated by cbindgen from crates/ffi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define GN_METHOD_DIFFERENTIAL 0

#define GN_METHOD_SPATIAL 1

#define GN_FORMAT_CSV 0

#define GN_FORMAT_JSON 1

#define GN_FORMAT_PLOT 2

typedef enum GnStatus {
  GN_STATUS_OK = 0,
  GN_STATUS_NULL_POINTER = 1,
  GN_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The differential reference run has no transverse signal.
   */
  GN_STATUS_ZERO_REFERENCE = 3,
  GN_STATUS_IO = 4,
  GN_STATUS_OUT_OF_RANGE = 5,
  GN_STATUS_PANIC = 6,
} GnStatus;

/**
 * Opaque factor list.
 */
typedef struct GnFactorization GnFactorization;

/**
 * Opaque scan result.
 */
typedef struct GnScanResult GnScanResult;

/**
 * Scan parameters. Fill with `gn_scan_config_default` and override fields.
 */
typedef struct GnScanConfig {
  /**
   * `GN_METHOD_DIFFERENTIAL` or `GN_METHOD_SPATIAL`.
   */
  uint32_t method;
  uint64_t j_min;
  uint64_t j_max;
  uint64_t m;
  double threshold;
  /**
   * Per-pulse flip angle in radians (differential only).
   */
  double theta;
  /**
   * Whether differential signals are divided by the reference run.
   */
  bool normalize;
  /**
   * Gradient slices (spatial only).
   */
  uint32_t n_slices;
  uint32_t windings;
  uint32_t exponent;
  /**
   * Worker threads; 0 uses the global pool.
   */
  uint32_t jobs;
} GnScanConfig;

typedef struct GnGaussSum {
  double re;
  double im;
  double magnitude;
} GnGaussSum;

typedef struct GnSample {
  uint64_t j;
  double raw_re;
  double raw_im;
  double normalized;
} GnSample;

typedef struct GnRecord {
  uint64_t j;
  /**
   * NaN when the simulation failed for this trial factor.
   */
  double normalized;
  double raw_re;
  double raw_im;
  bool classified;
  bool arithmetic_check;
  bool failed;
} GnRecord;

typedef struct GnFactor {
  uint64_t value;
  uint32_t multiplicity;
  /**
   * False when the scan could not establish primality.
   */
  bool prime;
} GnFactor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gn_last_error(void);

/**
 * Differential method, M = 15, θ = 1°, j in [2, 2], threshold 0.7,
 * 256 slices, 1 winding, exponent 2.
 */
struct GnScanConfig gn_scan_config_default(void);

/**
 * # Safety
 * `out` must be null or point to writable memory for one `GnGaussSum`.
 */
enum GnStatus gn_gauss_sum(uint64_t n,
                           uint32_t exponent,
                           uint64_t j,
                           uint64_t m,
                           struct GnGaussSum *out);

/**
 * Simulates one trial factor with the method in `cfg`; the range fields of
 * `cfg` are ignored.
 *
 * # Safety
 * `cfg` must point to a valid `GnScanConfig`; `out` to writable memory for
 * one `GnSample`.
 */
enum GnStatus gn_simulate(uint64_t n,
                          const struct GnScanConfig *cfg,
                          uint64_t j,
                          struct GnSample *out);

/**
 * Runs a scan and hands back an owned result in `*out`.
 *
 * # Safety
 * `cfg` must point to a valid `GnScanConfig`; `out` to a writable pointer.
 */
enum GnStatus gn_scan(uint64_t n, const struct GnScanConfig *cfg, struct GnScanResult **out);

/**
 * Number of records, or 0 for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle from `gn_scan`.
 */
size_t gn_scan_len(const struct GnScanResult *result);

/**
 * # Safety
 * `result` must be a live handle from `gn_scan`; `out` writable.
 */
enum GnStatus gn_scan_record(const struct GnScanResult *result, size_t index, struct GnRecord *out);

/**
 * Writes the result as CSV, JSON or plot data (`GN_FORMAT_*`) to `path`.
 *
 * # Safety
 * `result` must be a live handle; `path` a NUL-terminated UTF-8 string.
 */
enum GnStatus gn_scan_write(const struct GnScanResult *result, uint32_t format, const char *path);

/**
 * # Safety
 * `result` must be null or a handle from `gn_scan` not yet freed.
 */
void gn_scan_free(struct GnScanResult *result);

/**
 * Factors `n` completely. The range fields of `cfg` are ignored.
 *
 * # Safety
 * `cfg` must point to a valid `GnScanConfig`; `out` to a writable pointer.
 */
enum GnStatus gn_factorize(uint64_t n,
                           const struct GnScanConfig *cfg,
                           struct GnFactorization **out);

/**
 * # Safety
 * `f` must be null or a live handle from `gn_factorize`.
 */
size_t gn_factorization_len(const struct GnFactorization *f);

/**
 * # Safety
 * `f` must be a live handle from `gn_factorize`; `out` writable.
 */
enum GnStatus gn_factorization_get(const struct GnFactorization *f,
                                   size_t index,
                                   struct GnFactor *out);

/**
 * # Safety
 * `f` must be null or a handle from `gn_factorize` not yet freed.
 */
void gn_factorization_free(struct GnFactorization *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSS_NMR_H */
