/* C interface of the lne toolkit. Generated by cbindgen; do not edit. */

#ifndef LNE_H
#define LNE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. `Ok` is zero; the other values name the
 * failure class and leave a message for [`lne_last_error_message`].
 */
typedef enum LneStatus {
  LNE_STATUS_OK = 0,
  LNE_STATUS_NULL_ARGUMENT = 1,
  LNE_STATUS_INVALID_UTF8 = 2,
  LNE_STATUS_PARSE = 3,
  LNE_STATUS_DOMAIN = 4,
  LNE_STATUS_STRUCTURAL = 5,
  LNE_STATUS_PRECONDITION = 6,
  LNE_STATUS_PRECISION = 7,
  LNE_STATUS_UNSUPPORTED = 8,
  LNE_STATUS_IO = 9,
  LNE_STATUS_JSON = 10,
  LNE_STATUS_INTERNAL = 11,
  LNE_STATUS_PANIC = 12,
} LneStatus;

/**
 * Outcome of a decision. Inconclusive is a legitimate answer of the
 * one-sided criterion, not an error.
 */
typedef enum LneVerdict {
  LNE_VERDICT_NE = 0,
  LNE_VERDICT_NON_NE = 1,
  LNE_VERDICT_INCONCLUSIVE = 2,
} LneVerdict;

/**
 * Opaque parsed germ. Create with [`lne_curve_parse`], release with
 * [`lne_curve_free`]. Handles are immutable and safe to share across
 * threads for reading.
 */
typedef struct LneCurve LneCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *lne_version(void);

/**
 * JSON schema of every envelope produced by this library. The pointer is
 * static; do not free it.
 */
const char *lne_output_schema(void);

/**
 * Message of the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *lne_last_error_message(void);

/**
 * Release a string returned through a `char **` out parameter.
 */
void lne_string_free(char *text);

/**
 * Parse a germ from its textual form, e.g. `"y^2 - x^3"` or
 * `"x^2 + (1-2i)*y^3"`. On success `*out` owns the new handle.
 */
enum LneStatus lne_curve_parse(const char *text, struct LneCurve **out);

/**
 * Release a handle returned by [`lne_curve_parse`]. Null is a no-op.
 */
void lne_curve_free(struct LneCurve *curve);

/**
 * Canonical rendering of the germ; parsing it back yields the same
 * polynomial.
 */
enum LneStatus lne_curve_render(const struct LneCurve *curve, char **out);

/**
 * Number of ambient variables of the germ.
 */
enum LneStatus lne_curve_num_vars(const struct LneCurve *curve, size_t *out);

/**
 * Decide normal embedding of a plane curve germ. `json_out` may be null
 * when only the verdict is wanted.
 */
enum LneStatus lne_plane_curve(const struct LneCurve *curve,
                               enum LneVerdict *verdict_out,
                               char **json_out);

/**
 * Run the sectional criterion on a germ in three or more variables.
 * `precision` is in bits, 0 for the default. With `use_cone_shortcut` a
 * non-reduced tangent cone settles the verdict without a slice search.
 * `json_out` may be null.
 */
enum LneStatus lne_slice_test(const struct LneCurve *curve,
                              uint64_t seed,
                              uint32_t precision,
                              bool use_cone_shortcut,
                              enum LneVerdict *verdict_out,
                              char **json_out);

/**
 * Sample an arc pair on a non normally embedded plane curve and fit the
 * inner over outer blow-up rate. The envelope lands in `json_out`.
 */
enum LneStatus lne_witness(const struct LneCurve *curve, uint32_t precision, char **json_out);

/**
 * Decide a Pham-Brieskorn sum with unit coefficients from its exponent
 * list.
 */
enum LneStatus lne_brieskorn(const uint32_t *exponents, size_t count, enum LneVerdict *verdict_out);

/**
 * Re-check every witness value inside a slice-test envelope (the JSON text
 * a previous call or the CLI produced). Returns `Ok` only when all checks
 * pass; `checks_out` (nullable) receives them as a JSON array of strings.
 */
enum LneStatus lne_revalidate(const char *envelope_json, char **checks_out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LNE_H */
