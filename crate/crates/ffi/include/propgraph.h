#ifndef PROPGRAPH_H
#define PROPGRAPH_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgAlignMode {
  PG_ALIGN_MODE_WARPING = 0,
  PG_ALIGN_MODE_GAP = 1,
} PgAlignMode;

typedef enum PgCost {
  PG_COST_ABS = 0,
  PG_COST_SQUARED = 1,
  /**
   * 0/1 pulses: mismatch `alpha`, 0 vs gap 1, 1 vs gap forbidden.
   */
  PG_COST_BINARY = 2,
} PgCost;

/**
 * Result of a call. Values above `PG_STATUS_OK` mirror the CLI exit-code
 * classes where one applies.
 */
typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input: bad file contents, non-finite states, bad parameters.
   */
  PG_STATUS_INVALID_INPUT = 2,
  /**
   * Well-formed but unusable input, e.g. fewer than two individuals.
   */
  PG_STATUS_DEGENERATE = 3,
  PG_STATUS_IO = 4,
  PG_STATUS_OUT_OF_RANGE = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  PG_STATUS_INTERNAL = 6,
} PgStatus;

typedef enum PgMethod {
  PG_METHOD_PROPOSED = 0,
  PG_METHOD_BASELINE = 1,
} PgMethod;

typedef struct PgAlignment PgAlignment;

/**
 * Named state sequences of equal length.
 */
typedef struct PgDataset PgDataset;

typedef struct PgEstimate PgEstimate;

typedef struct PgAlignConfig {
  enum PgAlignMode mode;
  enum PgCost cost;
  double alpha;
  /**
   * Used by `PG_COST_ABS` in gap mode.
   */
  double gap_penalty;
  double tolerance;
} PgAlignConfig;

typedef struct PgEstimateConfig {
  double bandwidth;
  size_t grid_points;
  /**
   * Fixed threshold; NaN reads it off the density.
   */
  double theta;
  /**
   * Restrict indirect paths to edges above the threshold.
   */
  bool above_threshold_paths;
} PgEstimateConfig;

/**
 * Edge of an estimated graph, 0-based vertex indices.
 */
typedef struct PgEdge {
  size_t src;
  size_t dst;
  double ad;
} PgEdge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next `pg_*` call on the same thread.
 */
const char *pg_last_error_message(void);

/**
 * # Safety
 * `s` must come from a `pg_*` function returning an owned string, or be NULL.
 */
void pg_string_free(char *s);

struct PgAlignConfig pg_align_config_default(void);

struct PgEstimateConfig pg_estimate_config_default(void);

struct PgDataset *pg_dataset_new(void);

/**
 * Appends a copy of `values[0..len]` under `id`. All sequences of one
 * dataset must have the same length.
 *
 * # Safety
 * `ds` must be a live dataset handle, `id` a NUL-terminated string and
 * `values` readable for `len` doubles (may be NULL when `len == 0`).
 */
enum PgStatus pg_dataset_push(struct PgDataset *ds,
                              const char *id,
                              const double *values,
                              size_t len);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum PgStatus pg_dataset_read_csv(const char *path, struct PgDataset **out);

/**
 * # Safety
 * `ds` must be a live dataset handle and `path` a NUL-terminated string.
 */
enum PgStatus pg_dataset_write_csv(const struct PgDataset *ds, const char *path);

/**
 * Number of individuals, 0 for NULL.
 *
 * # Safety
 * `ds` must be a live dataset handle or NULL.
 */
size_t pg_dataset_len(const struct PgDataset *ds);

/**
 * Series length, 0 for NULL or an empty dataset.
 *
 * # Safety
 * `ds` must be a live dataset handle or NULL.
 */
size_t pg_dataset_series_len(const struct PgDataset *ds);

/**
 * # Safety
 * `ds` must come from this library and not be used afterwards.
 */
void pg_dataset_free(struct PgDataset *ds);

/**
 * Aligns individuals `i` and `j` (0-based).
 *
 * # Safety
 * `ds` must be a live dataset handle, `config` readable and `out` writable.
 */
enum PgStatus pg_align(const struct PgDataset *ds,
                       size_t i,
                       size_t j,
                       const struct PgAlignConfig *config,
                       struct PgAlignment **out);

/**
 * # Safety
 * `al` must be a live alignment handle.
 */
double pg_alignment_min_cost(const struct PgAlignment *al);

/**
 * # Safety
 * `al` must be a live alignment handle.
 */
double pg_alignment_avg_delay(const struct PgAlignment *al);

/**
 * Exact number of minimum-cost alignments in decimal. Free with
 * `pg_string_free`.
 *
 * # Safety
 * `al` must be a live alignment handle.
 */
char *pg_alignment_count(const struct PgAlignment *al);

/**
 * Exact delay sum over all minimum-cost alignments in decimal. Free with
 * `pg_string_free`.
 *
 * # Safety
 * `al` must be a live alignment handle.
 */
char *pg_alignment_delay_sum(const struct PgAlignment *al);

/**
 * # Safety
 * `al` must come from `pg_align` and not be used afterwards.
 */
void pg_alignment_free(struct PgAlignment *al);

/**
 * # Safety
 * `ds` must be a live dataset handle, both configs readable and `out`
 * writable.
 */
enum PgStatus pg_estimate(const struct PgDataset *ds,
                          enum PgMethod method,
                          const struct PgAlignConfig *align,
                          const struct PgEstimateConfig *config,
                          struct PgEstimate **out);

/**
 * # Safety
 * `est` must be a live estimate handle.
 */
double pg_estimate_theta(const struct PgEstimate *est);

/**
 * # Safety
 * `est` must be a live estimate handle or NULL.
 */
size_t pg_estimate_num_vertices(const struct PgEstimate *est);

/**
 * # Safety
 * `est` must be a live estimate handle or NULL.
 */
size_t pg_estimate_num_edges(const struct PgEstimate *est);

/**
 * Edges ordered by `(src, dst)`.
 *
 * # Safety
 * `est` must be a live estimate handle and `out` writable.
 */
enum PgStatus pg_estimate_edge(const struct PgEstimate *est, size_t k, struct PgEdge *out);

/**
 * # Safety
 * `est` must be a live estimate handle or NULL.
 */
size_t pg_estimate_num_layers(const struct PgEstimate *est);

/**
 * # Safety
 * `est` must be a live estimate handle and `out` writable.
 */
enum PgStatus pg_estimate_layer_of(const struct PgEstimate *est, size_t v, size_t *out);

/**
 * Average delay of `j` from `i`.
 *
 * # Safety
 * `est` must be a live estimate handle and `out` writable.
 */
enum PgStatus pg_estimate_ad(const struct PgEstimate *est, size_t i, size_t j, double *out);

/**
 * Graphviz rendering of the estimate. Free with `pg_string_free`.
 *
 * # Safety
 * `est` must be a live estimate handle.
 */
char *pg_estimate_to_dot(const struct PgEstimate *est);

/**
 * # Safety
 * `est` must come from `pg_estimate` and not be used afterwards.
 */
void pg_estimate_free(struct PgEstimate *est);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROPGRAPH_H */
