/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef RATSOS_H
#define RATSOS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; the numeric values match the `ratsos` CLI exit codes.
 */
typedef enum RatsosStatus {
  RATSOS_STATUS_OK = 0,
  /**
   * The certificate does not prove the problem's polynomial.
   */
  RATSOS_STATUS_REJECT = 1,
  /**
   * Malformed problem, certificate or literal.
   */
  RATSOS_STATUS_PARSE_ERROR = 2,
  /**
   * Field not totally real, minimal polynomial not squarefree, sum not
   * rational, stated target wrong, or a negative value for `foursquare`.
   */
  RATSOS_STATUS_PRECONDITION = 3,
  /**
   * Null pointer or otherwise invalid argument.
   */
  RATSOS_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A bug in the library (caught panic).
   */
  RATSOS_STATUS_INTERNAL = 5,
} RatsosStatus;

/**
 * Opaque certificate handle.
 */
typedef struct RatsosCertificate RatsosCertificate;

/**
 * Opaque problem handle.
 */
typedef struct RatsosProblem RatsosProblem;

/**
 * Sizes of a certificate.
 */
typedef struct RatsosCounts {
  /**
   * Number of weighted terms.
   */
  size_t terms;
  /**
   * Whether the certificate carries pure squares.
   */
  bool expanded;
  /**
   * Number of pure squares; 0 unless `expanded`.
   */
  size_t squares;
  /**
   * `(4r - 3) m` for degree `r` and `m` input squares.
   */
  size_t bound;
} RatsosCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a problem file. On success stores a new handle in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RatsosStatus ratsos_problem_parse(const char *text, struct RatsosProblem **out);

/**
 * # Safety
 * `problem` must be null or a handle from [`ratsos_problem_parse`] not yet
 * freed.
 */
void ratsos_problem_free(struct RatsosProblem *problem);

/**
 * Degree of the problem's field, or 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t ratsos_problem_degree(const struct RatsosProblem *problem);

/**
 * Number of input squares, or 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t ratsos_problem_inputs(const struct RatsosProblem *problem);

/**
 * Computes a rational certificate. `compress` merges input squares with
 * equal traces; `expand` adds pure squares.
 *
 * # Safety
 * `problem` must be a live handle and `out` a valid pointer.
 */
enum RatsosStatus ratsos_descend(const struct RatsosProblem *problem,
                                 bool expand,
                                 bool compress,
                                 struct RatsosCertificate **out);

/**
 * Parses a certificate file. On success stores a new handle in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RatsosStatus ratsos_certificate_parse(const char *text, struct RatsosCertificate **out);

/**
 * Canonical text of a certificate, or null for a null handle. Release with
 * [`ratsos_string_free`].
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
char *ratsos_certificate_print(const struct RatsosCertificate *cert);

/**
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
enum RatsosStatus ratsos_certificate_counts(const struct RatsosCertificate *cert,
                                            struct RatsosCounts *out);

/**
 * # Safety
 * `cert` must be null or a handle not yet freed.
 */
void ratsos_certificate_free(struct RatsosCertificate *cert);

/**
 * Checks `cert` against the polynomial of `problem`: `Ok` on accept,
 * `Reject` (with the first differing monomial in the last error) otherwise.
 *
 * # Safety
 * Both handles must be live.
 */
enum RatsosStatus ratsos_verify(const struct RatsosProblem *problem,
                                const struct RatsosCertificate *cert);

/**
 * Writes the rational literal `value` as a sum of the fewest rational
 * squares, e.g. `"7 = 2^2 + 1^2 + 1^2 + 1^2"`, into a new string `*out`.
 *
 * # Safety
 * `value` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RatsosStatus ratsos_foursquare(const char *value, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ratsos_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *ratsos_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RATSOS_H */
