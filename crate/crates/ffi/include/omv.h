#ifndef OMV_H
#define OMV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OmvStatus {
  OMV_STATUS_OK = 0,
  OMV_STATUS_NULL_POINTER = 1,
  OMV_STATUS_PARSE = 2,
  OMV_STATUS_INVALID_LATTICE = 3,
  OMV_STATUS_PRECISION_EXHAUSTED = 4,
  OMV_STATUS_INVALID_ARGUMENT = 5,
  OMV_STATUS_INTERNAL = 6,
  OMV_STATUS_PANIC = 7,
} OmvStatus;

/**
 * Opaque lattice handle.
 */
typedef struct OmvLattice OmvLattice;

/**
 * Invariants of a lattice as given (not normalized).
 */
typedef struct OmvInvariants {
  uintptr_t rank;
  uintptr_t n_plus;
  uintptr_t n_minus;
  /**
   * −1 or +1.
   */
  int32_t det_sign;
  /**
   * Order of the discriminant group, `|det|`.
   */
  uint64_t discriminant;
  uint64_t level;
  /**
   * Twice the weight `rank / 2`.
   */
  uint32_t weight_twice;
  uintptr_t u_count;
} OmvInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a lattice expression such as `"U^2 + E8(-1) + A1(-3)"`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OmvStatus omv_lattice_parse(const char *expr, struct OmvLattice **out);

/**
 * Release a handle from [`omv_lattice_parse`]. Null is ignored.
 *
 * # Safety
 * `lat` must come from [`omv_lattice_parse`] and not have been freed.
 */
void omv_lattice_free(struct OmvLattice *lat);

/**
 * # Safety
 * `lat` must be a live handle and `out` a valid pointer.
 */
enum OmvStatus omv_lattice_rank(const struct OmvLattice *lat, uintptr_t *out);

/**
 * # Safety
 * `lat` must be a live handle and `out` a valid pointer.
 */
enum OmvStatus omv_lattice_invariants(const struct OmvLattice *lat, struct OmvInvariants *out);

/**
 * `c₁,₀` of the lattice brought to signature `(b, 2)`, with its absolute error bound.
 *
 * # Safety
 * `lat` must be a live handle; `value` and `error` valid pointers.
 */
enum OmvStatus omv_c10(const struct OmvLattice *lat, uint32_t digits, double *value, double *error);

/**
 * `r(k) = (2π)^k / (Γ(k)·ζ(⌊k⌋))` at `k = b/2 + 1`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum OmvStatus omv_r_of_k(uint32_t b, uint32_t digits, double *out);

/**
 * Full analysis as a JSON document; free the result with [`omv_string_free`].
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OmvStatus omv_analyze_json(const char *expr, uint32_t digits, char **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void omv_string_free(char *s);

/**
 * Message for the last failure on this thread. Valid until the next failing call on
 * the same thread; never null.
 */
const char *omv_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMV_H */
