#ifndef SPA_REALIGN_H
#define SPA_REALIGN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SR_STATUS_NULL_POINTER = 1,
  /**
   * An argument was malformed or out of range.
   */
  SR_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The matrix is not a valid density matrix.
   */
  SR_STATUS_INVALID_STATE = 3,
  /**
   * The state is outside the domain where the SPA-R threshold is defined.
   */
  SR_STATUS_DOMAIN = 4,
  /**
   * Moment-estimation inputs admit no interval.
   */
  SR_STATUS_ESTIMATION = 5,
  /**
   * An eigenvalue iteration failed to converge.
   */
  SR_STATUS_NO_CONVERGENCE = 6,
  /**
   * Internal panic caught at the boundary.
   */
  SR_STATUS_INTERNAL = 7,
} SrStatus;

typedef enum SrFamily {
  SR_FAMILY_RHO_T = 0,
  SR_FAMILY_RHO_A = 1,
  SR_FAMILY_ISOTROPIC = 2,
  SR_FAMILY_ALPHA_STATE = 3,
} SrFamily;

typedef enum SrCaseTag {
  SR_CASE_TAG_QUADRATIC = 0,
  SR_CASE_TAG_CASE1 = 1,
  SR_CASE_TAG_CASE2 = 2,
} SrCaseTag;

/**
 * Opaque handle to a validated bipartite state and its realignment.
 */
typedef struct SrState SrState;

/**
 * Threshold data of the SPA-R map.
 */
typedef struct SrSpaThreshold {
  size_t d;
  double trace_r;
  double lower_bound;
  double k;
  double l;
  /**
   * Whether the moment sign test certifies `R(rho)` positive semidefinite.
   */
  bool psd;
} SrSpaThreshold;

/**
 * Criterion report at one mixing probability.
 */
typedef struct SrReport {
  double p;
  double trace_norm_spa_r;
  double upper_bound;
  bool spa_r_entangled;
  double error_norm;
  double error_bound_general;
  double error_bound_separable;
  bool error_entangled;
  double q1;
  /**
   * NaN when undefined.
   */
  double q2;
  double realignment_score;
  bool realignment_entangled;
} SrReport;

typedef struct SrInterval {
  double lower;
  double upper;
  enum SrCaseTag case_tag;
} SrInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a member of a named family. `dim` is used by the isotropic family
 * and ignored otherwise.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SrStatus sr_state_from_family(enum SrFamily family,
                                   double param,
                                   size_t dim,
                                   struct SrState **out);

/**
 * Builds a state from `2 * n * n` doubles, `n = dim_a * dim_b`, holding
 * `(re, im)` pairs in row-major order.
 *
 * # Safety
 * `entries` must point to `len` readable doubles; `out` must be valid for
 * writes.
 */
enum SrStatus sr_state_from_entries(size_t dim_a,
                                    size_t dim_b,
                                    const double *entries,
                                    size_t len,
                                    struct SrState **out);

/**
 * Parses a state file document (NUL-terminated UTF-8 JSON).
 *
 * # Safety
 * `json` must be a valid C string; `out` must be valid for writes.
 */
enum SrStatus sr_state_from_json(const char *json, struct SrState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void sr_state_free(struct SrState *state);

/**
 * # Safety
 * `state` must be a live handle; outputs must be valid for writes.
 */
enum SrStatus sr_state_dims(const struct SrState *state, size_t *dim_a, size_t *dim_b);

/**
 * `||R(rho)||_1`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid for writes.
 */
enum SrStatus sr_realignment_norm(const struct SrState *state, double *out);

/**
 * # Safety
 * `state` must be a live handle; `out` must be valid for writes.
 */
enum SrStatus sr_spa_threshold(const struct SrState *state, struct SrSpaThreshold *out);

/**
 * Runs every criterion at mixing probability `p`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid for writes.
 */
enum SrStatus sr_analyze(const struct SrState *state, double p, double tol, struct SrReport *out);

/**
 * `s = Tr[R~ P]` with `P = SWAP/d`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be valid for writes.
 */
enum SrStatus sr_simulate_s(const struct SrState *state, double p, double *out);

/**
 * Quadratic interval for the first moment of `R(rho)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SrStatus sr_m1_interval_quadratic(double s, size_t d, double k, struct SrInterval *out);

/**
 * Case-split interval for the first moment of `R(rho)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SrStatus sr_m1_case_bounds(double s, size_t d, double k, struct SrInterval *out);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sr_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *sr_status_str(enum SrStatus status);

/**
 * Library version as a static C string.
 */
const char *sr_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPA_REALIGN_H */
