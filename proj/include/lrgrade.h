/* C interface to the LR mesh grading library.
 *
 * Every object-returning call hands back a new handle the caller frees with
 * the matching *_free; every text-returning call allocates with malloc and
 * is released through lrg_free_text. Calls never write through their out
 * pointers on failure. lrg_last_error() describes the most recent failure
 * on the calling thread.
 *
 * Coordinates cross this boundary as decimal strings and must be dyadic
 * (denominator a power of two): "0.5", "0.375", "1". Meshes and sets use
 * the LRMESH/LRSET text formats; regions and render options use the same
 * JSON shapes the scenario files use.
 */
#ifndef LRGRADE_H
#define LRGRADE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lrg_mesh lrg_mesh;
typedef struct lrg_set lrg_set;

typedef enum lrg_status {
    LRG_OK = 0,
    LRG_ERR_ARGUMENT = 1, /* null handle or malformed scalar argument */
    LRG_ERR_PARSE = 2,    /* text input failed to parse */
    LRG_ERR_REJECTED = 3, /* well-formed input violating a library invariant */
    LRG_ERR_INTERNAL = 4
} lrg_status;

const char* lrg_version(void);

/* Message for the calling thread's most recent failure; empty after
 * a success. The pointer stays owned by the library. */
const char* lrg_last_error(void);

void lrg_free_text(char* text);

/* --- meshes ------------------------------------------------------------ */

/* Open tensor mesh on the square [lo,hi]^2 with the given interior knots
 * (dyadic decimals, both axes) at multiplicity one. */
lrg_status lrg_mesh_tensor(const char* lo, const char* hi, int degree_x, int degree_y,
                           const char* const* interior, size_t interior_len, lrg_mesh** out);

lrg_status lrg_mesh_parse(const char* text, lrg_mesh** out);
lrg_status lrg_mesh_format(const lrg_mesh* mesh, char** out_text);

/* Box and meshline counts plus the shortest box side as a decimal string;
 * any out pointer may be null. */
lrg_status lrg_mesh_stats(const lrg_mesh* mesh, size_t* out_boxes, size_t* out_lines,
                          char** out_min_side);

void lrg_mesh_free(lrg_mesh* mesh);

/* --- member sets -------------------------------------------------------- */

lrg_status lrg_set_initial(const lrg_mesh* mesh, lrg_set** out);

/* Parse an LRSET text against the mesh it lives on. */
lrg_status lrg_set_parse(const char* text, const lrg_mesh* mesh, lrg_set** out);
lrg_status lrg_set_format(const lrg_set* set, char** out_text);

/* The set's current mesh, as a fresh handle. */
lrg_status lrg_set_mesh(const lrg_set* set, lrg_mesh** out);
lrg_status lrg_set_size(const lrg_set* set, size_t* out);

void lrg_set_free(lrg_set* set);

/* --- refinement --------------------------------------------------------- */

/* One grading iteration toward the region, producing a new set. region_json
 * is one region object, e.g. {"rect": [0, 0, 0.25, 0.25]} or
 * {"curve": "bean"}; variant is 'H' or 'V'. A region that rasterizes to no
 * boxes is rejected. out_region_boxes (optional) receives the size of the
 * rasterized region. */
lrg_status lrg_refine(const lrg_set* set, const char* region_json, char variant,
                      size_t* out_region_boxes, lrg_set** out);

/* --- verification ------------------------------------------------------- */

/* Full verification report as JSON. pou_samples <= 0 keeps the default
 * (1000); seed drives the sample points only. out_pass (optional) receives
 * 1 when every check passed. */
lrg_status lrg_verify_json(const lrg_set* set, int pou_samples, unsigned long long seed,
                           char** out_json, int* out_pass);

/* --- rendering ----------------------------------------------------------- */

/* Standalone SVG of the mesh. options_json (optional) may hold:
 *   "size", "margin"   canvas geometry in pixels
 *   "region"           a region object, shaded under the meshlines
 *   "shadow_dir"       "H" or "V": shade the grading sweep of the region
 *   "support"          member index into `set`, outlined with its knot grid
 * set may be null when no "support" is requested. */
lrg_status lrg_render_svg(const lrg_mesh* mesh, const lrg_set* set, const char* options_json,
                          char** out_svg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LRGRADE_H */
