#ifndef RICHPOW_H
#define RICHPOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RpStatus {
  RP_STATUS_OK = 0,
  RP_STATUS_NULL_POINTER = 1,
  RP_STATUS_INVALID_UTF8 = 2,
  RP_STATUS_PARSE = 3,
  RP_STATUS_INVALID_ARGUMENT = 4,
  RP_STATUS_PRECONDITION = 5,
  RP_STATUS_RESOURCE_EXCEEDED = 6,
  RP_STATUS_BUFFER_TOO_SMALL = 7,
  RP_STATUS_IO = 8,
  RP_STATUS_INTERNAL = 9,
} RpStatus;

typedef enum RpPowerKind {
  RP_POWER_KIND_ORDINARY = 0,
  RP_POWER_KIND_ABELIAN = 1,
  RP_POWER_KIND_ADDITIVE = 2,
} RpPowerKind;

typedef enum RpVerdict {
  RP_VERDICT_FREE = 0,
  RP_VERDICT_POWER_FOUND = 1,
  RP_VERDICT_INCONCLUSIVE = 2,
} RpVerdict;

typedef struct RpEerTree RpEerTree;

typedef struct RpFixedPoint RpFixedPoint;

typedef struct RpMorphism RpMorphism;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *rp_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *rp_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rp_string_free(char *s);

/**
 * Parses rules such as `"0->00001 1->01101"`.
 *
 * # Safety
 * `rules` must be a nul-terminated string; `out` must be writable.
 */
enum RpStatus rp_morphism_parse(const char *rules, struct RpMorphism **out);

/**
 * # Safety
 * `m` must come from [`rp_morphism_parse`] and not have been freed.
 */
void rp_morphism_free(struct RpMorphism *m);

/**
 * Canonical rule text.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum RpStatus rp_morphism_to_string(const struct RpMorphism *m, char **out);

/**
 * Writes `f(word)` into `buf` (capacity `cap`) and its length into
 * `out_len`. When `cap` is too small nothing is written to `buf`, the
 * needed length is still reported and `BufferTooSmall` is returned.
 *
 * # Safety
 * `word` must hold `len` letters; `buf` must hold `cap` letters.
 */
enum RpStatus rp_morphism_apply(const struct RpMorphism *m,
                                const int64_t *word,
                                size_t len,
                                int64_t *buf,
                                size_t cap,
                                size_t *out_len);

/**
 * Stream over the fixed point of `m` starting with `seed`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum RpStatus rp_fixed_point_new(const struct RpMorphism *m,
                                 int64_t seed,
                                 struct RpFixedPoint **out);

/**
 * Copies the length-`n` prefix into `buf`, which must hold `n` letters.
 *
 * # Safety
 * `fp` must be a live handle; `buf` must hold `n` letters.
 */
enum RpStatus rp_fixed_point_prefix(struct RpFixedPoint *fp, size_t n, int64_t *buf);

/**
 * # Safety
 * `fp` must come from [`rp_fixed_point_new`] and not have been freed.
 */
void rp_fixed_point_free(struct RpFixedPoint *fp);

struct RpEerTree *rp_eertree_new(void);

/**
 * Appends a letter; `out_new` tells whether a new palindrome appeared.
 *
 * # Safety
 * `t` must be a live handle; `out_new` may be null.
 */
enum RpStatus rp_eertree_add_letter(struct RpEerTree *t, int64_t letter, bool *out_new);

/**
 * Reverts the last [`rp_eertree_add_letter`].
 *
 * # Safety
 * `t` must be a live handle.
 */
enum RpStatus rp_eertree_undo(struct RpEerTree *t);

/**
 * Distinct nonempty palindromes in the current word (0 for null).
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t rp_eertree_palindrome_count(const struct RpEerTree *t);

/**
 * Length of the current word (0 for null).
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t rp_eertree_len(const struct RpEerTree *t);

/**
 * # Safety
 * `t` must come from [`rp_eertree_new`] and not have been freed.
 */
void rp_eertree_free(struct RpEerTree *t);

/**
 * Is the whole word a k-power of the given kind?
 *
 * # Safety
 * `word` must hold `len` letters; `out` must be writable.
 */
enum RpStatus rp_is_kpower(const int64_t *word,
                           size_t len,
                           size_t k,
                           enum RpPowerKind kind,
                           bool *out);

/**
 * # Safety
 * `word` must hold `len` letters; `out` must be writable.
 */
enum RpStatus rp_is_rich(const int64_t *word, size_t len, bool *out);

/**
 * Scan report (JSON) for the length-`n` prefix; `max_period` 0 means all.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum RpStatus rp_scan_fixed_point_json(const struct RpMorphism *m,
                                       int64_t seed,
                                       size_t k,
                                       enum RpPowerKind kind,
                                       size_t n,
                                       size_t max_period,
                                       char **out);

/**
 * Richness report (JSON) for the length-`n` prefix of the fixed point.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum RpStatus rp_stream_richness_json(const struct RpMorphism *m,
                                      int64_t seed,
                                      size_t n,
                                      char **out);

/**
 * Decision certificate (JSON) with certified default bounds. `verdict`
 * may be null.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum RpStatus rp_decide_json(const struct RpMorphism *m,
                             int64_t seed,
                             size_t k,
                             enum RpVerdict *verdict,
                             char **out);

/**
 * Exhaustive search (JSON result) for the longest word over `alphabet`
 * (e.g. `"0,1,2"`) avoiding k-powers, with symmetry reduction.
 *
 * # Safety
 * `alphabet` must be a nul-terminated string; `out` must be writable.
 */
enum RpStatus rp_search_json(const char *alphabet,
                             size_t k,
                             enum RpPowerKind kind,
                             bool rich,
                             char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RICHPOW_H */
