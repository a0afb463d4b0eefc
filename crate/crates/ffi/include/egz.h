#ifndef EGZ_H
#define EGZ_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EgzPolicy {
  EGZ_POLICY_NONE = 0,
  EGZ_POLICY_REGISTRY_ONLY = 1,
  EGZ_POLICY_ASSUME_ALL = 2,
} EgzPolicy;

typedef enum EgzQuantity {
  EGZ_QUANTITY_S = 0,
  EGZ_QUANTITY_ETA = 1,
} EgzQuantity;

typedef enum EgzSearchStatus {
  EGZ_SEARCH_STATUS_EXACT = 0,
  // Node budget ran out; the value is a lower bound.
  EGZ_SEARCH_STATUS_LOWER_BOUND_ONLY = 1,
  // Wall-clock budget ran out; the value is a lower bound.
  EGZ_SEARCH_STATUS_BUDGET_EXHAUSTED = 2,
} EgzSearchStatus;

// Result code of every fallible call.
typedef enum EgzStatus {
  EGZ_STATUS_OK = 0,
  // A required pointer was null or a string was not UTF-8.
  EGZ_STATUS_NULL_OR_INVALID_ARGUMENT = 1,
  // Group spec or sequence could not be parsed.
  EGZ_STATUS_PARSE = 2,
  // Argument outside the domain of the operation.
  EGZ_STATUS_DOMAIN = 3,
  // Property D query on a non-homocyclic group.
  EGZ_STATUS_NOT_HOMOCYCLIC = 4,
  // The group is too large for the requested operation.
  EGZ_STATUS_TOO_LARGE = 5,
  EGZ_STATUS_INTERNAL = 99,
} EgzStatus;

typedef enum EgzVerdict {
  EGZ_VERDICT_HOLDS = 0,
  EGZ_VERDICT_FAILS = 1,
  EGZ_VERDICT_UNKNOWN = 2,
} EgzVerdict;

// Opaque finite Abelian group.
typedef struct EgzGroup EgzGroup;

// Opaque outcome of an exact search.
typedef struct EgzSearchResult EgzSearchResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or an empty string.
//
// The pointer stays valid until the next `egz_*` call on the same thread.
const char *egz_last_error(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void egz_string_free(char *s);

// Parse a group spec such as `Z3^2xZ6`.
//
// # Safety
// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
enum EgzStatus egz_group_parse(const char *spec, struct EgzGroup **out);

// Build a group from cyclic factor orders.
//
// # Safety
// `orders` must point to `len` readable values and `out` must be valid.
enum EgzStatus egz_group_new(const uint64_t *orders, size_t len, struct EgzGroup **out);

// # Safety
// `g` must be null or a handle from this library that has not been freed.
void egz_group_free(struct EgzGroup *g);

// Canonical primary form, e.g. `Z2xZ3^2` for `Z3xZ6`. Free with [`egz_string_free`].
//
// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_group_render(const struct EgzGroup *g, char **out);

// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_group_exponent(const struct EgzGroup *g, uint64_t *out);

// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_group_order(const struct EgzGroup *g, uint64_t *out);

// Number of coordinates per element in [`egz_find_zero_sum`]: one per factor as written
// in the string the group was parsed from.
//
// # Safety
// `g` must be a live handle.
size_t egz_group_coordinate_count(const struct EgzGroup *g);

// Exhaustive search for `s` or `η`. Zero budgets select the defaults (2e8 nodes, 15 minutes).
//
// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_exact(const struct EgzGroup *g,
                         enum EgzQuantity q,
                         uint64_t max_nodes,
                         uint64_t max_wall_ms,
                         struct EgzSearchResult **out);

// Convenience wrapper: exact `s(G)` with default budgets; fails with `EGZ_STATUS_DOMAIN` if
// the search did not complete.
//
// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_exact_s(const struct EgzGroup *g, uint64_t *out);

// As [`egz_exact_s`] for `η(G)`.
//
// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_exact_eta(const struct EgzGroup *g, uint64_t *out);

// # Safety
// `r` must be null or a live result handle.
void egz_search_result_free(struct EgzSearchResult *r);

// The computed value (a lower bound unless the status is exact). 0 for a null handle.
//
// # Safety
// `r` must be null or a live result handle.
uint64_t egz_search_result_value(const struct EgzSearchResult *r);

// # Safety
// `r` must be a live result handle.
enum EgzStatus egz_search_result_status(const struct EgzSearchResult *r, enum EgzSearchStatus *out);

// Full outcome as JSON, including extremal sequences. Free with [`egz_string_free`].
//
// # Safety
// `r` must be a live result handle and `out` valid.
enum EgzStatus egz_search_result_to_json(const struct EgzSearchResult *r, char **out);

// Look for a zero-sum subsequence.
//
// `coords` holds `len` elements, each as [`egz_group_coordinate_count`] consecutive
// residues. When `exactly` is true the subsequence must have exactly `length` terms,
// otherwise between 1 and `length`. On success `*found` is set; if a subsequence exists
// and `witness` is non-null, the positions of its terms in the input are written to
// `witness` (capacity `len`) and their number to `*witness_len`.
//
// # Safety
// `g` must be a live handle, `coords` must hold `len * coordinate_count` values, `found`
// must be valid, and `witness`/`witness_len` must be null or valid for `len` entries.
enum EgzStatus egz_find_zero_sum(const struct EgzGroup *g,
                                 const uint64_t *coords,
                                 size_t len,
                                 bool exactly,
                                 uint64_t length,
                                 bool *found,
                                 size_t *witness,
                                 size_t *witness_len);

// Every applicable bound with the best ones under `policy`, as JSON.
// A non-positive `tol` selects the default gamma tolerance.
//
// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_best_bounds_json(const struct EgzGroup *g,
                                    enum EgzQuantity q,
                                    enum EgzPolicy policy,
                                    double tol,
                                    char **out);

// Upper enclosure of `γ_{k,q}`; a non-positive `tol` selects the default.
//
// # Safety
// `out` must be valid.
enum EgzStatus egz_naslund_gamma(uint64_t k, uint64_t q, double tol, double *out);

// Whether the built-in registry already establishes Property D for `g`.
//
// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_known_property_d(const struct EgzGroup *g, bool *out);

// Decide Property D by search. Zero budgets select the defaults.
//
// # Safety
// `g` must be a live handle and `out` valid.
enum EgzStatus egz_check_property_d(const struct EgzGroup *g,
                                    uint64_t max_nodes,
                                    uint64_t max_wall_ms,
                                    enum EgzVerdict *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EGZ_H */
