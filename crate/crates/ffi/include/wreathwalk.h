#ifndef WREATHWALK_H
#define WREATHWALK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum WwStatus {
  WW_STATUS_OK = 0,
  WW_STATUS_NULL_POINTER = 1,
  WW_STATUS_INVALID_INPUT = 2,
  WW_STATUS_PARSE = 3,
  WW_STATUS_SPEC_MISMATCH = 4,
  WW_STATUS_DOMAIN = 5,
  WW_STATUS_RESOURCE = 6,
  WW_STATUS_OUTSIDE_BALL = 7,
  WW_STATUS_INTERNAL = 8,
} WwStatus;

// Local-time functionals for [`ww_functional_estimate`].
typedef enum WwFunctional {
  // `b ↦ sqrt b`
  WW_FUNCTIONAL_SQRT = 0,
  // `b ↦ 1{b > 0}`, whose sum is the range
  WW_FUNCTIONAL_INDICATOR = 1,
  // `b ↦ b`, whose sum is `n + 1`
  WW_FUNCTIONAL_IDENTITY = 2,
  // The concave extension `L_(k, alpha)`
  WW_FUNCTIONAL_EXTENSION = 3,
} WwFunctional;

// An element of some group. Operations check that it fits the group given.
typedef struct WwElement WwElement;

// A group with its decorated generating set.
typedef struct WwGroup WwGroup;

typedef struct WwDriftBracket {
  uint64_t n;
  uint64_t trials;
  uint64_t seed;
  double lower_mean;
  double lower_stderr;
  double upper_mean;
  double upper_stderr;
} WwDriftBracket;

typedef struct WwRangeStats {
  uint64_t n;
  uint64_t trials;
  uint64_t master_seed;
  double mean;
  double variance;
  double std_error;
  // `E[R] ln n / n`
  double normalized_mean;
  // `6 E[R]^2 + E[R]`
  double variance_bound;
  double q1;
  double q2;
} WwRangeStats;

typedef struct WwEstimate {
  uint64_t n;
  uint64_t trials;
  double mean;
  // Standard error of the mean (named to avoid the C `stderr` macro).
  double std_error;
  uint64_t master_seed;
} WwEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` (NUL
// terminated, truncated to `len`) and returns the full message length
// without the terminator. `buf` may be null to query the length.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
uintptr_t ww_last_error_message(char *buf, uintptr_t len);

// Library version as a static NUL-terminated string.
const char *ww_version(void);

// Parses a group such as `"Z2 wr C2"` and builds its generators. With
// `word_multiplicity` false each distinct generator has equal weight.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum WwStatus ww_group_new(const char *spec, bool word_multiplicity, struct WwGroup **out);

// # Safety
// `group` must be null or a handle from [`ww_group_new`] not yet freed.
void ww_group_free(struct WwGroup *group);

// Number of generators, 0 for a null handle.
//
// # Safety
// `group` must be null or a live group handle.
uintptr_t ww_group_generator_count(const struct WwGroup *group);

// A new element handle for generator `index`.
//
// # Safety
// `group` must be a live group handle; `out` must be writable.
enum WwStatus ww_group_generator(const struct WwGroup *group,
                                 uintptr_t index,
                                 struct WwElement **out);

// # Safety
// `group` must be a live group handle; `out` must be writable.
enum WwStatus ww_element_identity(const struct WwGroup *group, struct WwElement **out);

// # Safety
// `element` must be null or a live element handle.
void ww_element_free(struct WwElement *element);

// `out = a · b`.
//
// # Safety
// All handles must be live; `out` must be writable.
enum WwStatus ww_element_multiply(const struct WwGroup *group,
                                  const struct WwElement *a,
                                  const struct WwElement *b,
                                  struct WwElement **out);

// # Safety
// All handles must be live; `out` must be writable.
enum WwStatus ww_element_invert(const struct WwGroup *group,
                                const struct WwElement *a,
                                struct WwElement **out);

// # Safety
// All handles must be live; `out` must be writable.
enum WwStatus ww_element_equal(const struct WwElement *a, const struct WwElement *b, bool *out);

// Canonical text of `element`, released with [`ww_string_free`].
//
// # Safety
// Handles must be live; `out` must be writable.
enum WwStatus ww_element_encode(const struct WwGroup *group,
                                const struct WwElement *element,
                                char **out);

// Parses the canonical text form.
//
// # Safety
// `encoded` must be NUL-terminated; `out` must be writable.
enum WwStatus ww_element_decode(const struct WwGroup *group,
                                const char *encoded,
                                struct WwElement **out);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void ww_string_free(char *s);

// Lower and upper bounds on the word length of `element`.
//
// # Safety
// Handles must be live; `lower` and `upper` must be writable.
enum WwStatus ww_word_length_bracket(const struct WwGroup *group,
                                     const struct WwElement *element,
                                     double *lower,
                                     double *upper);

// Monte Carlo bracket on the expected word length after `n` steps.
//
// # Safety
// `group` must be live; `out` must be writable.
enum WwStatus ww_drift_bracket(const struct WwGroup *group,
                               uint64_t n,
                               uint64_t trials,
                               uint64_t seed,
                               struct WwDriftBracket *out);

// Range statistics of `trials` planar walks of `n` steps.
//
// # Safety
// `out` must be writable.
enum WwStatus ww_range_statistics(uint64_t n,
                                  uint64_t trials,
                                  uint64_t seed,
                                  struct WwRangeStats *out);

// Monte Carlo estimate of `E Σ_z f(b_z)`. `k` and `alpha` are read only
// for the extension.
//
// # Safety
// `out` must be writable.
enum WwStatus ww_functional_estimate(enum WwFunctional functional,
                                     uint32_t k,
                                     double alpha,
                                     uint64_t n,
                                     uint64_t trials,
                                     uint64_t seed,
                                     struct WwEstimate *out);

// `ln T_{k,alpha}`; `+inf` when `T` is too deep for a finite log.
//
// # Safety
// `out` must be writable.
enum WwStatus ww_threshold_ln(uint32_t k, double alpha, double *out);

// `ln L~_{k,alpha}(x)` for `x = exp(ln_x)`.
//
// # Safety
// `out` must be writable.
enum WwStatus ww_l_tilde_ln(uint32_t k, double alpha, double ln_x, double *out);

// The concave extension `L_{k,alpha}(x)` at a finite `x ≥ 0`.
//
// # Safety
// `out` must be writable.
enum WwStatus ww_concave_extension(uint32_t k, double alpha, double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WREATHWALK_H */
