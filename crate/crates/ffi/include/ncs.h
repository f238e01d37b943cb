#ifndef NCS_H
#define NCS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result code of every fallible entry point.
 */
typedef enum NcsStatus {
  NCS_STATUS_OK = 0,
  NCS_STATUS_NULL_POINTER = 1,
  NCS_STATUS_INVALID_ARGUMENT = 2,
  NCS_STATUS_INVALID_GRAPH = 3,
  NCS_STATUS_DISCONNECTED = 4,
  NCS_STATUS_PARSE = 5,
  NCS_STATUS_NO_SOLUTION = 6,
  NCS_STATUS_AMBIGUOUS = 7,
  NCS_STATUS_INFEASIBLE = 8,
  NCS_STATUS_INTERNAL = 9,
} NcsStatus;

typedef enum NcsAlgorithm {
  NCS_ALGORITHM_EXHAUSTIVE = 0,
  NCS_ALGORITHM_FAST = 1,
} NcsAlgorithm;

/**
 * Opaque synchronization graph.
 */
typedef struct NcsGraph NcsGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *ncs_last_error_message(void);

/**
 * Builds a graph from `edge_count` pairs stored flat in `edges` (`2 * edge_count` ids).
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (or be null when
 * `edge_count` is 0); `out` must be writable.
 */
enum NcsStatus ncs_graph_new(size_t nodes,
                             const size_t *edges,
                             size_t edge_count,
                             struct NcsGraph **out);

/**
 * Complete graph on `nodes` nodes.
 *
 * # Safety
 * `out` must be writable.
 */
enum NcsStatus ncs_graph_complete(size_t nodes, struct NcsGraph **out);

/**
 * Parses a graph file body: a JSON object or a plain edge list.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum NcsStatus ncs_graph_parse(const char *text, struct NcsGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not have been freed; null is ignored.
 */
void ncs_graph_free(struct NcsGraph *graph);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t ncs_graph_node_count(const struct NcsGraph *graph);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t ncs_graph_edge_count(const struct NcsGraph *graph);

/**
 * Graph as `{"edges": [[a, b], ...], "nodes": N}`.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum NcsStatus ncs_graph_to_json(const struct NcsGraph *graph, char **out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum NcsStatus ncs_edge_connectivity(const struct NcsGraph *graph, size_t *out);

/**
 * Largest K for which the graph is K-resilient.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum NcsStatus ncs_tight_bound(const struct NcsGraph *graph, size_t *out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum NcsStatus ncs_is_k_resilient(const struct NcsGraph *graph, size_t k, bool *out);

/**
 * Fewest edges any k-resilient graph on `nodes` nodes can have.
 */
size_t ncs_edge_count_lower_bound(size_t nodes, size_t k);

/**
 * Solves a measurement document `{"graph": ..., "measurements": [[a, b, value], ...]}`
 * and writes the result as JSON. With `exact` false the values are read as
 * doubles and `eta` is the residual threshold.
 *
 * # Safety
 * `measurements` must be a NUL-terminated string; `out` must be writable.
 */
enum NcsStatus ncs_sync_json(const char *measurements,
                             enum NcsAlgorithm algorithm,
                             bool exact,
                             double eta,
                             char **out);

/**
 * Minimum k-resilient graphs on `nodes` nodes, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum NcsStatus ncs_min_graph_json(size_t nodes, size_t k, size_t limit, bool dedup, char **out);

/**
 * Tiered group plan for `nodes` nodes, as JSON.
 *
 * # Safety
 * `out` must be writable.
 */
enum NcsStatus ncs_tier_plan_json(size_t nodes, char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ncs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCS_H */
