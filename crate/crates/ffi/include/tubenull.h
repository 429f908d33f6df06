#ifndef TUBENULL_H
#define TUBENULL_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values match the command-line exit codes
 * where the two overlap.
 */
typedef enum TnStatus {
  TN_STATUS_OK = 0,
  /**
   * The computation ran but the property did not hold (e.g. a cover
   * with an uncovered cylinder). The report is still returned.
   */
  TN_STATUS_VERIFY_FAILED = 1,
  TN_STATUS_INVALID_INPUT = 2,
  TN_STATUS_BUDGET_EXCEEDED = 3,
  TN_STATUS_NULL_POINTER = 4,
  TN_STATUS_PANIC = 5,
} TnStatus;

/**
 * A digit-restricted carpet.
 */
typedef struct TnCarpet TnCarpet;

/**
 * A homogeneous self-similar system.
 */
typedef struct TnIfs TnIfs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *tn_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void tn_string_free(char *s);

/**
 * Parses a `carpet.v1` document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TnStatus tn_carpet_from_json(const char *json, struct TnCarpet **out);

/**
 * # Safety
 * `c` must be NULL or a handle from [`tn_carpet_from_json`], not yet freed.
 */
void tn_carpet_free(struct TnCarpet *c);

/**
 * Parses an `ifs.v1` or `carpet.v1` document into a system.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TnStatus tn_ifs_from_json(const char *json, struct TnIfs **out);

/**
 * The system of a carpet, as a new handle.
 *
 * # Safety
 * `c` must be a live carpet handle; `out` must be writable.
 */
enum TnStatus tn_carpet_to_ifs(const struct TnCarpet *c, struct TnIfs **out);

/**
 * # Safety
 * `f` must be NULL or a live system handle.
 */
void tn_ifs_free(struct TnIfs *f);

/**
 * Number of maps in the system, or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live system handle.
 */
size_t tn_ifs_len(const struct TnIfs *f);

/**
 * Separation check of the projection along `v[0..dim]` up to depth
 * `depth`; writes a `wsc_report.v1` document. A `budget_limit` of 0 means the
 * default limit.
 *
 * # Safety
 * `f` must be live, `v` must hold `dim` values, `out` must be writable.
 */
enum TnStatus tn_wsc_check(const struct TnIfs *f,
                           const int64_t *v,
                           size_t dim,
                           size_t depth,
                           uint64_t budget_limit,
                           char **out);

/**
 * Builds the depth-`depth` slab cover with exponent `s`; writes a
 * `cover.v1` document.
 *
 * # Safety
 * `f` must be live; `out` must be writable.
 */
enum TnStatus tn_cover_generate(const struct TnIfs *f,
                                size_t depth,
                                double s,
                                uint64_t budget_limit,
                                char **out);

/**
 * Checks a `cover.v1` document against every cylinder of depth `depth`
 * (the cover's own depth when 0); writes a `verify.v1` document and
 * returns `VerifyFailed` if some cylinder is uncovered.
 *
 * # Safety
 * `f` must be live, `cover_json` NUL-terminated, `out` writable.
 */
enum TnStatus tn_cover_verify(const struct TnIfs *f,
                              const char *cover_json,
                              size_t depth,
                              uint64_t budget_limit,
                              char **out);

/**
 * Fourier tail certificate for a carpet; writes an `r0_certificate.v1`
 * document.
 *
 * # Safety
 * `c` must be live; `out` must be writable.
 */
enum TnStatus tn_r0_certificate(const struct TnCarpet *c, char **out);

/**
 * Number of length-`n` words over `m` letters with at least `t` copies
 * of a fixed letter; writes a `freq_count.v1` document.
 *
 * # Safety
 * `out` must be writable.
 */
enum TnStatus tn_count_freq_words(size_t m, size_t n, size_t t, char **out);

/**
 * Dyadic box counts at scales `2^-depths[i]`; writes a `boxcount.v1`
 * document.
 *
 * # Safety
 * `f` must be live, `depths` must hold `len` values, `out` writable.
 */
enum TnStatus tn_box_count(const struct TnIfs *f,
                           const size_t *depths,
                           size_t len,
                           uint64_t budget_limit,
                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TUBENULL_H */
