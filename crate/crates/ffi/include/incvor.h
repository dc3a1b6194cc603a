#ifndef INCVOR_H
#define INCVOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum VdStatus {
  VD_OK = 0,
  VD_DEGENERATE = 1,
  VD_DUPLICATE = 2,
  VD_OUT_OF_BOUNDS = 3,
  VD_STRUCTURE = 4,
  VD_NULL_POINTER = 5,
} VdStatus;

/**
 * Opaque diagram handle.
 */
typedef struct VdDiagram VdDiagram;

/**
 * Counters of the most recent successful insertion.
 */
typedef struct VdInsertStats {
  uint64_t links;
  uint64_t cuts;
  uint64_t cells_changed;
  uint64_t dcr_rebuilds;
  uint64_t time_ns;
} VdInsertStats;

/**
 * Creates an empty diagram accepting coordinates in `[-bound, bound]`.
 * Returns null if the bound is not positive or too large.
 */
struct VdDiagram *vd_diagram_new(int64_t bound);

/**
 * # Safety
 * `h` must be null or a handle from `vd_diagram_new` not yet freed.
 */
void vd_diagram_free(struct VdDiagram *h);

/**
 * Inserts a site. On failure the diagram is unchanged. `stats` may be null.
 *
 * # Safety
 * `h` must be a live handle; `stats` must be null or writable.
 */
enum VdStatus vd_insert(struct VdDiagram *h, int64_t x, int64_t y, struct VdInsertStats *stats);

/**
 * Number of inserted sites, sentinels excluded.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uint64_t vd_site_count(const struct VdDiagram *h);

/**
 * Number of finite Voronoi vertices.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uint64_t vd_vertex_count(const struct VdDiagram *h);

/**
 * Number of finite Voronoi edges.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uint64_t vd_edge_count(const struct VdDiagram *h);

/**
 * Full consistency check of the diagram and its indices.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
enum VdStatus vd_check_invariants(const struct VdDiagram *h);

/**
 * Text export of the diagram, to be released with `vd_string_free`.
 * Returns null on a null handle or an internal error.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
char *vd_export_text(const struct VdDiagram *h, bool include_sentinels);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void vd_string_free(char *s);

#endif  /* INCVOR_H */
