#ifndef WMHN_H
#define WMHN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WmhnStatus {
  WMHN_STATUS_OK = 0,
  WMHN_STATUS_INVALID_ARGUMENT = 1,
  WMHN_STATUS_NULL_POINTER = 2,
  WMHN_STATUS_PARSE = 3,
  WMHN_STATUS_IO = 4,
  WMHN_STATUS_PANIC = 5,
} WmhnStatus;

typedef enum WmhnAlgorithm {
  WMHN_ALGORITHM_BF = 0,
  WMHN_ALGORITHM_CDP = 1,
  WMHN_ALGORITHM_EQPO = 2,
  WMHN_ALGORITHM_NDQO = 3,
  WMHN_ALGORITHM_NDQIO = 4,
} WmhnAlgorithm;

/**
 * Opaque optimizer report.
 */
typedef struct WmhnReport WmhnReport;

/**
 * Opaque network topology.
 */
typedef struct WmhnTopology WmhnTopology;

/**
 * `[BER, power, delay]` of a route.
 */
typedef struct WmhnUtilityVector {
  double ber;
  double power;
  uint32_t delay;
} WmhnUtilityVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *wmhn_last_error_message(void);

/**
 * Number of loop-free routes from node 1 to node `n_nodes`.
 *
 * # Safety
 * `out` must be null or valid for writing one `uint64_t`.
 */
enum WmhnStatus wmhn_count_routes(size_t n_nodes, uint64_t *out);

/**
 * Writes the route with index `id` as a string such as `{1 3 2 5}`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum WmhnStatus wmhn_route_string(uint64_t id, size_t n_nodes, char **out);

/**
 * Draws a random topology with the default radio constants.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum WmhnStatus wmhn_topology_generate(size_t n_nodes, uint64_t seed, struct WmhnTopology **out);

/**
 * Parses a topology from a NUL-terminated JSON document.
 *
 * # Safety
 * `json` must be null or a valid NUL-terminated string; `out` must be null or
 * valid for writing one pointer.
 */
enum WmhnStatus wmhn_topology_from_json(const char *json, struct WmhnTopology **out);

/**
 * Serializes a topology to JSON. Free the result with [`wmhn_string_free`].
 *
 * # Safety
 * `topo` must be null or a live handle; `out` must be null or valid for
 * writing one pointer.
 */
enum WmhnStatus wmhn_topology_to_json(const struct WmhnTopology *topo, char **out);

/**
 * Number of nodes in a topology, or 0 for a null handle.
 *
 * # Safety
 * `topo` must be null or a live handle.
 */
size_t wmhn_topology_n_nodes(const struct WmhnTopology *topo);

/**
 * Utility vector of the route visiting `nodes[0..len]` (1-based node
 * numbers, source first, destination last).
 *
 * # Safety
 * `topo` must be null or a live handle; `nodes` must be null or valid for
 * reading `len` elements; `out` must be null or valid for writing.
 */
enum WmhnStatus wmhn_topology_route_uv(const struct WmhnTopology *topo,
                                       const size_t *nodes,
                                       size_t len,
                                       struct WmhnUtilityVector *out);

/**
 * # Safety
 * `topo` must be null or a handle from this library not yet freed.
 */
void wmhn_topology_free(struct WmhnTopology *topo);

/**
 * Runs one optimizer on a topology. `seed` drives the stochastic
 * optimizers and is ignored by the deterministic ones.
 *
 * # Safety
 * `topo` must be null or a live handle; `out` must be null or valid for
 * writing one pointer.
 */
enum WmhnStatus wmhn_run(const struct WmhnTopology *topo,
                         enum WmhnAlgorithm algorithm,
                         uint64_t seed,
                         struct WmhnReport **out);

/**
 * Number of routes in the reported front, or 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t wmhn_report_opf_len(const struct WmhnReport *report);

/**
 * Index of the `i`-th front route, in increasing index order.
 *
 * # Safety
 * `report` must be null or a live handle; `out` must be null or valid for
 * writing one `uint64_t`.
 */
enum WmhnStatus wmhn_report_opf_route_id(const struct WmhnReport *report, size_t i, uint64_t *out);

/**
 * Parallel cost-function evaluations spent, or NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double wmhn_report_parallel_cfes(const struct WmhnReport *report);

/**
 * Sequential cost-function evaluations spent, or NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double wmhn_report_sequential_cfes(const struct WmhnReport *report);

/**
 * Serializes a report to JSON. Free the result with [`wmhn_string_free`].
 *
 * # Safety
 * `report` must be null or a live handle; `out` must be null or valid for
 * writing one pointer.
 */
enum WmhnStatus wmhn_report_to_json(const struct WmhnReport *report, char **out);

/**
 * # Safety
 * `report` must be null or a handle from this library not yet freed.
 */
void wmhn_report_free(struct WmhnReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void wmhn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WMHN_H */
