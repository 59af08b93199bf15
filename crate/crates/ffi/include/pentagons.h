#ifndef PENTAGONS_H
#define PENTAGONS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum PtgStatus {
  PTG_STATUS_OK = 0,
  PTG_STATUS_NULL_POINTER = 1,
  PTG_STATUS_INVALID_ARGUMENT = 2,
  PTG_STATUS_PARSE_ERROR = 3,
  /*
   Input violates general position or the signotope axioms.
   */
  PTG_STATUS_INCONSISTENT = 4,
  PTG_STATUS_BUDGET_EXCEEDED = 5,
  PTG_STATUS_UNSATISFIABLE = 6,
  PTG_STATUS_NOT_FOUND = 7,
  PTG_STATUS_PANIC = 8,
} PtgStatus;

/*
 A point set with distinct x-coordinates, in general position or not.
 */
typedef struct PtgPointSet PtgPointSet;

/*
 A total assignment of orientations to the triples of `1..=n`.
 */
typedef struct PtgSignotope PtgSignotope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *ptg_last_error(void);

/*
 # Safety
 `s` must come from this library and not have been freed; NULL is ignored.
 */
void ptg_string_free(char *s);

/*
 `C(floor(n/2),5) + C(ceil(n/2),5)`, saturated to 64 bits.
 */
uint64_t ptg_conjectured_mu5(uint64_t n);

/*
 # Safety
 `out` must be a valid pointer.
 */
enum PtgStatus ptg_pinwheel(size_t k, struct PtgPointSet **out);

/*
 # Safety
 `out` must be a valid pointer.
 */
enum PtgStatus ptg_parabolic(size_t n, struct PtgPointSet **out);

/*
 Parses a point-set JSON document.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PtgStatus ptg_point_set_from_json(const char *json, struct PtgPointSet **out);

/*
 # Safety
 `set` must be a live handle and `out` a valid pointer.
 */
enum PtgStatus ptg_point_set_to_json(const struct PtgPointSet *set, char **out);

/*
 Number of points; 0 for NULL.

 # Safety
 `set` must be NULL or a live handle.
 */
size_t ptg_point_set_len(const struct PtgPointSet *set);

/*
 # Safety
 `set` must be NULL or a handle from this library that was not freed.
 */
void ptg_point_set_free(struct PtgPointSet *set);

/*
 Number of `k`-subsets in convex position.

 # Safety
 `set` must be a live handle and `out` a valid pointer.
 */
enum PtgStatus ptg_count_convex(const struct PtgPointSet *set, size_t k, uint64_t *out);

/*
 # Safety
 `set` must be a live handle and `out` a valid pointer.
 */
enum PtgStatus ptg_signotope_of(const struct PtgPointSet *set, struct PtgSignotope **out);

/*
 Parses the text format: `n` on the first line, then one `+`/`-` per
 triple in lexicographic order.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PtgStatus ptg_signotope_from_text(const char *text, struct PtgSignotope **out);

/*
 # Safety
 `sig` must be a live handle and `out` a valid pointer.
 */
enum PtgStatus ptg_signotope_to_text(const struct PtgSignotope *sig, char **out);

/*
 Number of points; 0 for NULL.

 # Safety
 `sig` must be NULL or a live handle.
 */
size_t ptg_signotope_n(const struct PtgSignotope *sig);

/*
 # Safety
 `sig` must be NULL or a handle from this library that was not freed.
 */
void ptg_signotope_free(struct PtgSignotope *sig);

/*
 Number of falsified axiom clauses.

 # Safety
 `sig` must be a live handle and `out` a valid pointer.
 */
enum PtgStatus ptg_signotope_axiom_violations(const struct PtgSignotope *sig, size_t *out);

/*
 Convex pentagons of an axiom-consistent assignment.

 # Safety
 `sig` must be a live handle and `out` a valid pointer.
 */
enum PtgStatus ptg_count_convex_pentagons(const struct PtgSignotope *sig, uint64_t *out);

/*
 The MaxSAT formula for `n` points in the classic WCNF format.

 # Safety
 `out` must be a valid pointer.
 */
enum PtgStatus ptg_encode_wcnf(size_t n, bool symmetry, char **out);

/*
 The SAT formula for `n` points in DIMACS format.

 # Safety
 `out` must be a valid pointer.
 */
enum PtgStatus ptg_encode_dimacs(size_t n, bool with_axioms, char **out);

/*
 Exact minimum number of convex pentagons over `n`-point signotopes.

 A negative `ub_hint` means no hint; `max_propagations == 0` means no
 limit. `witness` may be NULL; otherwise it receives an optimal
 assignment. On [`PtgStatus::BudgetExceeded`], `optimum` holds a proven
 lower bound.

 # Safety
 `optimum` must be a valid pointer; `witness` must be NULL or valid.
 */
enum PtgStatus ptg_solve_exact(size_t n,
                               bool symmetry,
                               int64_t ub_hint,
                               uint64_t max_propagations,
                               uint64_t *optimum,
                               struct PtgSignotope **witness);

/*
 Clause-weighting local search with default parameters. A negative
 `target` means run all `max_flips` flips.

 # Safety
 `best` must be a valid pointer; `assignment` must be NULL or valid.
 */
enum PtgStatus ptg_sls_minimize(size_t n,
                                uint64_t seed,
                                uint64_t max_flips,
                                int64_t target,
                                uint64_t *best,
                                struct PtgSignotope **assignment);

/*
 Searches for points realizing `sig` with default parameters and the
 given seed. [`PtgStatus::NotFound`] makes no claim about realizability.

 # Safety
 `sig` must be a live handle and `out` a valid pointer.
 */
enum PtgStatus ptg_realize(const struct PtgSignotope *sig, uint64_t seed, struct PtgPointSet **out);

/*
 Library version as a static string.
 */
const char *ptg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PENTAGONS_H */
