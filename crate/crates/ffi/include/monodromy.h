#ifndef MONODROMY_H
#define MONODROMY_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum MdStatus {
  MD_STATUS_OK = 0,
  MD_STATUS_NULL_POINTER = 1,
  MD_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or unsupported input (parse error, singular matrix, ...).
   */
  MD_STATUS_INPUT = 3,
  /**
   * A pipeline stage failed.
   */
  MD_STATUS_PIPELINE = 4,
  /**
   * A numerical result could not be certified.
   */
  MD_STATUS_CERTIFICATION = 5,
  /**
   * Caller buffer too small; the required size has been written.
   */
  MD_STATUS_BUFFER_TOO_SMALL = 6,
  MD_STATUS_PANIC = 7,
} MdStatus;

typedef enum MdSystem {
  MD_SYSTEM_PENDULUM = 0,
  MD_SYSTEM_KEPLER = 1,
} MdSystem;

/**
 * Monodromy matrices of a Hamiltonian system and the group they generate.
 */
typedef struct MdMonodromy MdMonodromy;

/**
 * Output of the fundamental group pipeline.
 */
typedef struct MdPi1 MdPi1;

/**
 * Bivariate polynomial over Q(i).
 */
typedef struct MdPoly MdPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *md_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void md_string_free(char *s);

/**
 * Parse a polynomial in `x`, `y` with coefficients in Q(i).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum MdStatus md_poly_parse(const char *text, struct MdPoly **out);

/**
 * # Safety
 * `p` must be null or a handle from this library, not yet freed.
 */
void md_poly_free(struct MdPoly *p);

/**
 * Canonical text of a polynomial; free with [`md_string_free`].
 *
 * # Safety
 * `p` must be a live handle.
 */
char *md_poly_to_string(const struct MdPoly *p);

/**
 * Exact discriminant with respect to `y`, as text.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum MdStatus md_discriminant(const struct MdPoly *p, char **out);

/**
 * Certified critical values as JSON (after the seeded genericity fix).
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum MdStatus md_critical_values_json(const struct MdPoly *p, uint64_t seed, char **out);

/**
 * Projective change of coordinates. `matrix` is `identity`, `swap-yz` or
 * nine comma separated constants, row by row.
 *
 * # Safety
 * `p` must be a live handle, `matrix` a NUL-terminated string and `out`
 * writable.
 */
enum MdStatus md_transform(const struct MdPoly *p,
                           const char *matrix,
                           bool line_at_infinity,
                           struct MdPoly **out);

/**
 * Fundamental group of the complement of `p = 0` in C^2.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum MdStatus md_pi1(const struct MdPoly *p,
                     uint32_t precision,
                     uint64_t seed,
                     size_t budget,
                     struct MdPi1 **out);

/**
 * # Safety
 * `r` must be null or a handle from this library, not yet freed.
 */
void md_pi1_free(struct MdPi1 *r);

/**
 * Free rank of the abelianization; -1 on a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int64_t md_pi1_abelian_rank(const struct MdPi1 *r);

/**
 * Number of generators of the simplified presentation; -1 on a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int64_t md_pi1_generators(const struct MdPi1 *r);

/**
 * Torsion coefficients of the abelianization. Writes up to `cap` values
 * into `buf` and the total count into `len`.
 *
 * # Safety
 * `r` must be a live handle, `buf` valid for `cap` writes (may be null if
 * `cap` is 0) and `len` writable.
 */
enum MdStatus md_pi1_torsion(const struct MdPi1 *r, uint64_t *buf, size_t cap, size_t *len);

/**
 * Simplified presentation as text; free with [`md_string_free`].
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *md_pi1_presentation(const struct MdPi1 *r);

/**
 * Every intermediate of the pipeline as JSON; free with [`md_string_free`].
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *md_pi1_json(const struct MdPi1 *r);

/**
 * Monodromy of the default loops of `system`, or of one constant loop at
 * their basepoint when `constant_loop` is set.
 *
 * # Safety
 * `out` must be writable.
 */
enum MdStatus md_monodromy(enum MdSystem system,
                           uint32_t precision,
                           bool constant_loop,
                           struct MdMonodromy **out);

/**
 * # Safety
 * `m` must be null or a handle from this library, not yet freed.
 */
void md_monodromy_free(struct MdMonodromy *m);

/**
 * Number of loops; 0 on a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t md_monodromy_loop_count(const struct MdMonodromy *m);

/**
 * Matrix of loop `index`, row-major. Writes the dimension into `dim` and,
 * if `cap >= dim*dim`, the entries into `buf`.
 *
 * # Safety
 * `m` must be a live handle, `buf` valid for `cap` writes and `dim`
 * writable.
 */
enum MdStatus md_monodromy_matrix(const struct MdMonodromy *m,
                                  size_t index,
                                  int64_t *buf,
                                  size_t cap,
                                  size_t *dim);

/**
 * Description of the generated group; free with [`md_string_free`].
 *
 * # Safety
 * `m` must be null or a live handle.
 */
char *md_monodromy_group(const struct MdMonodromy *m);

/**
 * Full report as JSON; free with [`md_string_free`].
 *
 * # Safety
 * `m` must be null or a live handle.
 */
char *md_monodromy_json(const struct MdMonodromy *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONODROMY_H */
