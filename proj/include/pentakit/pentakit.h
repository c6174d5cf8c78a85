#ifndef PENTAKIT_H
#define PENTAKIT_H

/*
 * C interface to pentakit: banded solvers, experiment drivers, k-means and
 * droplet-theory helpers. Every call that can fail returns a pk_status;
 * the message of the most recent failure on a context is available from
 * pk_last_error. Handles are opaque and must be released with their
 * matching destroy function. Strings returned through char** are owned by
 * the caller and released with pk_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(PENTAKIT_BUILDING_LIBRARY)
#define PK_API __attribute__((visibility("default")))
#else
#define PK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pk_status {
  PK_OK = 0,
  PK_ZERO_PIVOT = 1,
  PK_DIMENSION_MISMATCH = 2,
  PK_SINGULAR_CORRECTION = 3,
  PK_SINGULAR_2X2 = 4,
  PK_LAYOUT_ERROR = 5,
  PK_RAGGED_INPUT = 6,
  PK_WINDOW_TOO_LARGE = 7,
  PK_STABILITY_VIOLATION = 8,
  PK_GRID_MISMATCH = 9,
  PK_NON_POSITIVE_ENERGY = 10,
  PK_SATURATED_FIELD = 11,
  PK_NON_POSITIVE_TIME = 12,
  PK_ROOT_BRACKET_FAILURE = 13,
  PK_EMPTY_WINDOW = 14,
  PK_DEGENERATE_INPUT = 15,
  PK_INVALID_ARGUMENT = 16,
  PK_IO = 17,
  PK_CONFIG = 18,
  PK_INTERNAL = 99
} pk_status;

typedef enum pk_matrix_kind {
  PK_TRI = 0,          /* bands a, b, c at offsets -1, 0, +1; arrays of n */
  PK_PENTA = 1,        /* bands a..e at offsets -2..+2; arrays of n */
  PK_CYCLIC_TRI = 2,   /* periodic, constant: each band is one scalar */
  PK_CYCLIC_PENTA = 3  /* periodic, constant: each band is one scalar */
} pk_matrix_kind;

typedef struct pk_context pk_context;
typedef struct pk_solver pk_solver;

PK_API const char* pk_version(void);
PK_API const char* pk_status_name(pk_status status);

/* A context owns a worker pool of `workers` threads (>= 1). */
PK_API pk_status pk_context_create(unsigned workers, pk_context** out);
PK_API void pk_context_destroy(pk_context* ctx);
PK_API const char* pk_last_error(const pk_context* ctx);

/* Factors the matrix once. `bands` holds 3 (tri) or 5 (penta) pointers. */
PK_API pk_status pk_solver_create(pk_context* ctx, pk_matrix_kind kind, size_t n,
                                  const double* const* bands, pk_solver** out);
PK_API size_t pk_solver_size(const pk_solver* solver);
PK_API pk_status pk_solver_solve(pk_context* ctx, const pk_solver* solver, const double* rhs,
                                 double* x);
/* Solves m systems in place; entry i of system s lives at x[i * m + s]. */
PK_API pk_status pk_solver_solve_batch(pk_context* ctx, const pk_solver* solver, size_t m,
                                       double* x);
PK_API void pk_solver_destroy(pk_solver* solver);

/* Experiments. Configs and summaries are JSON text. */
PK_API pk_status pk_experiment_names(pk_context* ctx, char** names_json);
PK_API pk_status pk_experiment_defaults(pk_context* ctx, const char* name, char** config_json);
PK_API pk_status pk_experiment_resolve(pk_context* ctx, const char* name,
                                       const char* overrides_json, char** config_json);
PK_API pk_status pk_experiment_run(pk_context* ctx, const char* name, const char* overrides_json,
                                   const char* out_dir, char** summary_json);
PK_API void pk_string_free(char* s);

/* Lloyd k-means on n row-major points of dimension d. Outputs: labels[n],
 * centroids[k * d], inertia (any may be NULL). Labels are canonicalised by
 * ascending centroid mean. */
PK_API pk_status pk_kmeans(pk_context* ctx, const double* points, size_t n, size_t d, size_t k,
                           uint64_t seed, size_t max_iter, size_t* labels, double* centroids,
                           double* inertia);

/* Self-similar droplet-size density and growth-rate density. */
PK_API pk_status pk_lsw_f(pk_context* ctx, double x, double* out);
PK_API pk_status pk_p_alpha(pk_context* ctx, double a, double* out);

#ifdef __cplusplus
}
#endif

#endif
