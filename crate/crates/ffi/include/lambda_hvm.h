#ifndef LAMBDA_HVM_H
#define LAMBDA_HVM_H

#include <stdint.h>
#include <stddef.h>
#include <stdbool.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum LhStatus {
  LH_STATUS_OK = 0,
  LH_STATUS_NULL_ARGUMENT = 1,
  LH_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The state lies outside the polytope.
   */
  LH_STATUS_INFEASIBLE = 3,
  LH_STATUS_BUFFER_TOO_SMALL = 4,
  LH_STATUS_FAILURE = 5,
  LH_STATUS_PANIC = 6,
} LhStatus;

/**
 * A parsed circuit with its input state.
 */
typedef struct LhCircuit LhCircuit;

/**
 * Sparse probability vector over vertices.
 */
typedef struct LhDistribution LhDistribution;

/**
 * Vertex model for fixed `(d, n)`.
 */
typedef struct LhModel LhModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *lh_version(void);

/**
 * Copies the last error message of this thread into `buf` (truncated,
 * always NUL-terminated when `cap > 0`) and returns its full length in
 * bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t lh_last_error(char *buf, size_t cap);

/**
 * Builds the vertex model for `d` and `n`, enumerating vertices.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle to.
 */
enum LhStatus lh_model_new(uint32_t d, uint32_t n, struct LhModel **out);

/**
 * # Safety
 * `m` must be null or a handle from [`lh_model_new`] not yet freed.
 */
void lh_model_free(struct LhModel *m);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live model handle.
 */
size_t lh_model_vertex_count(const struct LhModel *m);

/**
 * Length of a character-coordinate vector, `d^(2n)`.
 *
 * # Safety
 * `m` must be null or a live model handle.
 */
size_t lh_model_coord_len(const struct LhModel *m);

/**
 * Writes the character coordinates of vertex `alpha` into `out`.
 *
 * # Safety
 * `m` must be a live model handle and `out` must point to `cap` doubles.
 */
enum LhStatus lh_model_vertex_w(const struct LhModel *m, size_t alpha, double *out, size_t cap);

/**
 * Decomposes a named preset state over the vertices.
 *
 * # Safety
 * `m` must be a live model handle, `name` a NUL-terminated string and `out`
 * a valid pointer to write a handle to.
 */
enum LhStatus lh_decompose_preset(const struct LhModel *m,
                                  const char *name,
                                  struct LhDistribution **out);

/**
 * # Safety
 * `p` must be null or a live distribution handle.
 */
size_t lh_distribution_len(const struct LhDistribution *p);

/**
 * Entry `i` of the support: vertex index and weight.
 *
 * # Safety
 * `p` must be a live distribution handle; `vertex` and `weight` must be
 * valid for writes.
 */
enum LhStatus lh_distribution_get(const struct LhDistribution *p,
                                  size_t i,
                                  size_t *vertex,
                                  double *weight);

/**
 * # Safety
 * `p` must be null or a handle from [`lh_decompose_preset`] not yet freed.
 */
void lh_distribution_free(struct LhDistribution *p);

/**
 * Parses a JSON circuit description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer to write
 * a handle to.
 */
enum LhStatus lh_circuit_parse(const char *json, struct LhCircuit **out);

/**
 * Number of measurements, which is the outcome count per shot.
 *
 * # Safety
 * `c` must be null or a live circuit handle.
 */
size_t lh_circuit_measurements(const struct LhCircuit *c);

/**
 * # Safety
 * `c` must be null or a handle from [`lh_circuit_parse`] not yet freed.
 */
void lh_circuit_free(struct LhCircuit *c);

/**
 * Runs `shots` seeded trajectories. Outcomes are written row-major into
 * `outcomes` (`shots * measurements` entries) and final vertices into
 * `final_vertices` (`shots` entries); either may be null to skip it.
 *
 * # Safety
 * `m` and `c` must be live handles; non-null buffers must hold the stated
 * number of entries given by their capacities.
 */
enum LhStatus lh_sample(const struct LhModel *m,
                        const struct LhCircuit *c,
                        uint64_t seed,
                        uint64_t shots,
                        uint32_t *outcomes,
                        size_t outcomes_cap,
                        size_t *final_vertices,
                        size_t vertices_cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAMBDA_HVM_H */
