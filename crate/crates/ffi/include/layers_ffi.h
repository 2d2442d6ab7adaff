#ifndef LAYERS_FFI_H
#define LAYERS_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LayersStatus {
  LAYERS_STATUS_OK = 0,
  LAYERS_STATUS_NULL_POINTER = 1,
  LAYERS_STATUS_INVALID_ARGUMENT = 2,
  LAYERS_STATUS_INVALID_GRAPH = 3,
  LAYERS_STATUS_TIES_DETECTED = 4,
  LAYERS_STATUS_INVALID_CONFIG = 5,
  LAYERS_STATUS_IO = 6,
  LAYERS_STATUS_LIMIT_EXCEEDED = 7,
  LAYERS_STATUS_PANIC = 8,
} LayersStatus;

/**
 * Opaque simple graph.
 */
typedef struct LayersGraph LayersGraph;

/**
 * Opaque experiment report.
 */
typedef struct LayersReport LayersReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a simple graph on `n` vertices from `edge_count` pairs stored
 * flat in `edges` (`2 * edge_count` entries).
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (it may be null
 * when `edge_count` is 0) and `out` must be a valid pointer.
 */
enum LayersStatus layers_graph_from_edges(size_t n,
                                          const size_t *edges,
                                          size_t edge_count,
                                          struct LayersGraph **out);

/**
 * Samples a uniform simple graph with the given degree sequence.
 *
 * # Safety
 * `degrees` must point to `n` readable values and `out` must be valid.
 */
enum LayersStatus layers_graph_from_degrees(const size_t *degrees,
                                            size_t n,
                                            uint64_t seed,
                                            struct LayersGraph **out);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t layers_graph_vertex_count(const struct LayersGraph *g);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t layers_graph_edge_count(const struct LayersGraph *g);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void layers_graph_free(struct LayersGraph *g);

/**
 * One age draw: writes the layer of every vertex into `layers_out`, which
 * holds `len` entries and must be exactly the vertex count.
 *
 * # Safety
 * `g` must be a live handle and `layers_out` must point to `len` writable values.
 */
enum LayersStatus layers_sample_layers(const struct LayersGraph *g,
                                       uint64_t seed,
                                       uint32_t *layers_out,
                                       size_t len);

/**
 * Largest component of `T_k` under one age draw. Uses the same draw as
 * [`layers_sample_layers`] for equal seeds.
 *
 * # Safety
 * `g` must be a live handle and `out` must be valid.
 */
enum LayersStatus layers_tk_largest_component(const struct LayersGraph *g,
                                              uint64_t seed,
                                              uint32_t k,
                                              size_t *out);

/**
 * Layer of a point of `Z^d` under the lazy age field of `seed`, and whether
 * it lies in `T_k`.
 *
 * # Safety
 * `coords` must point to `d` readable values; `layer_out` and `open_out`
 * must be valid.
 */
enum LayersStatus layers_lattice_is_open(uint64_t seed,
                                         const int64_t *coords,
                                         size_t d,
                                         size_t k,
                                         size_t *layer_out,
                                         bool *open_out);

/**
 * Runs an experiment from `key = value` config text.
 *
 * # Safety
 * `config` must be a NUL-terminated string and `out` must be valid.
 */
enum LayersStatus layers_run_experiment(const char *config, struct LayersReport **out);

/**
 * Invariant violations counted by the report, or 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t layers_report_violations(const struct LayersReport *r);

/**
 * CSV rendering; free with [`layers_string_free`]. Null on a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *layers_report_csv(const struct LayersReport *r);

/**
 * JSON rendering; free with [`layers_string_free`]. Null on a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *layers_report_json(const struct LayersReport *r);

/**
 * # Safety
 * `r` must be null or a handle not yet freed.
 */
void layers_report_free(struct LayersReport *r);

/**
 * Message of the last failed call on this thread, or null if the last call
 * succeeded. Free with [`layers_string_free`].
 */
char *layers_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void layers_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAYERS_FFI_H */
