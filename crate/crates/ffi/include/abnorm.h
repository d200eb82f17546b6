#ifndef ABNORM_H
#define ABNORM_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AbnMixKind {
  ABN_MIX_KIND_EST4 = 0,
  ABN_MIX_KIND_EST5 = 1,
  ABN_MIX_KIND_BUZANO = 2,
  ABN_MIX_KIND_RE_IM = 3,
} AbnMixKind;

typedef enum AbnStatus {
  ABN_STATUS_OK = 0,
  ABN_STATUS_NULL_POINTER = 1,
  ABN_STATUS_INVALID_ARGUMENT = 2,
  ABN_STATUS_PARSE_ERROR = 3,
  ABN_STATUS_DIMENSION_ERROR = 4,
  ABN_STATUS_NON_HERMITIAN = 5,
  ABN_STATUS_CONVERGENCE_FAILURE = 6,
  ABN_STATUS_POST_CHECK_VIOLATION = 7,
  ABN_STATUS_HYPOTHESIS_VIOLATED = 8,
  ABN_STATUS_UNSUPPORTED_DIMENSION = 9,
  ABN_STATUS_IO_ERROR = 10,
  ABN_STATUS_PANIC = 11,
} AbnStatus;

// Opaque matrix handle.
typedef struct AbnMatrix AbnMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an `n×n` matrix from row-major real and imaginary parts.
// `im` may be null for a real matrix.
//
// # Safety
// `re` (and `im` if non-null) must point to `n*n` readable doubles; `out`
// must be writable.
enum AbnStatus abn_matrix_new(uintptr_t n,
                              const double *re,
                              const double *im,
                              struct AbnMatrix **out);

// Parses `{"n": .., "entries": [[[re, im], ..], ..]}`.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum AbnStatus abn_matrix_from_json(const char *json, struct AbnMatrix **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `m` must come from this library and not be freed twice.
void abn_matrix_free(struct AbnMatrix *m);

// Dimension of the matrix, or 0 for null.
//
// # Safety
// `m` must be null or a live handle.
uintptr_t abn_matrix_dim(const struct AbnMatrix *m);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum AbnStatus abn_operator_norm(const struct AbnMatrix *m, double *out);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum AbnStatus abn_numerical_radius(const struct AbnMatrix *m, double *out);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum AbnStatus abn_crawford_number(const struct AbnMatrix *m, double *out);

// `‖T‖_{α,β}`. `restarts = 0` selects the default.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum AbnStatus abn_alpha_beta_norm(const struct AbnMatrix *m,
                                   double alpha,
                                   double beta,
                                   uintptr_t restarts,
                                   uint64_t seed,
                                   double *out);

// Infimum over weights of a bound on `w(T)`. `out_t` (nullable) receives
// the minimizing `t = α/(α+β)`.
//
// # Safety
// `m` must be a live handle; `out` must be writable; `out_t` null or writable.
enum AbnStatus abn_infimum_mix(const struct AbnMatrix *m,
                               enum AbnMixKind kind,
                               double *out,
                               double *out_t);

// Refined lower bound for `w(T)²`.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum AbnStatus abn_refined_lower_bound(const struct AbnMatrix *m, double *out);

// Message of the last failed call on this thread, or null. Valid until the
// next call into the library.
const char *abn_last_error(void);

// Library version, a static nul-terminated string.
const char *abn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABNORM_H */
