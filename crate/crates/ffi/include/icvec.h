#ifndef ICVEC_H
#define ICVEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum IcvecStatus {
  ICVEC_STATUS_OK = 0,
  ICVEC_STATUS_NULL_POINTER = 1,
  ICVEC_STATUS_INVALID_ARGUMENT = 2,
  ICVEC_STATUS_EMPTY_INPUT = 3,
  ICVEC_STATUS_EMPTY_DIAGRAM = 4,
  ICVEC_STATUS_SINGULAR_COVARIANCE = 5,
  ICVEC_STATUS_INFINITE_DEATH = 6,
  ICVEC_STATUS_BUFFER_TOO_SMALL = 7,
  ICVEC_STATUS_INTERNAL = 8,
} IcvecStatus;

typedef enum IcvecCloudKind {
  ICVEC_CLOUD_KIND_UNIFORM = 0,
  ICVEC_CLOUD_KIND_NORMAL = 1,
  ICVEC_CLOUD_KIND_LATTICE = 2,
  ICVEC_CLOUD_KIND_SIERPINSKI = 3,
} IcvecCloudKind;

typedef enum IcvecMethod {
  ICVEC_METHOD_PERSISTENCE = 0,
  ICVEC_METHOD_INTERCONNECTIVITY = 1,
  ICVEC_METHOD_STABLE_INTERCONNECTIVITY = 2,
} IcvecMethod;

// Opaque point cloud.
typedef struct IcvecCloud IcvecCloud;

// Opaque persistence diagram.
typedef struct IcvecDiagram IcvecDiagram;

// Opaque feature vector.
typedef struct IcvecVector IcvecVector;

// Message of the last failing call on this thread. Valid until the next failing call.
const char *icvec_last_error(void);

// Library version as a static NUL-terminated string.
const char *icvec_version(void);

// Seeded synthetic cloud. `dim` is used by the uniform and normal kinds only.
//
// # Safety
// `out` must be valid for writing one pointer.
enum IcvecStatus icvec_cloud_generate(enum IcvecCloudKind kind,
                                      size_t dim,
                                      size_t n,
                                      uint64_t seed,
                                      struct IcvecCloud **out);

// Cloud from `n` row-major points of dimension `dim`.
//
// # Safety
// `coords` must point to `n * dim` readable doubles; `out` must be writable.
enum IcvecStatus icvec_cloud_from_coords(const double *coords,
                                         size_t n,
                                         size_t dim,
                                         struct IcvecCloud **out);

// # Safety
// `cloud` must be a live handle.
size_t icvec_cloud_len(const struct IcvecCloud *cloud);

// # Safety
// `cloud` must be a live handle.
size_t icvec_cloud_dim(const struct IcvecCloud *cloud);

// Copies the row-major coordinates into `buf`, which must hold `len * dim` doubles.
//
// # Safety
// `cloud` must be a live handle and `buf` writable for `capacity` doubles.
enum IcvecStatus icvec_cloud_coords(const struct IcvecCloud *cloud, double *buf, size_t capacity);

// # Safety
// `cloud` must be null or a handle not yet freed.
void icvec_cloud_free(struct IcvecCloud *cloud);

// Rips persistence in dimensions 0 and 1. `max_filtration` may be `INFINITY`;
// with `double_scale` nonzero, edges enter at half their length.
//
// # Safety
// `cloud` must be a live handle and `out` writable.
enum IcvecStatus icvec_persistence(const struct IcvecCloud *cloud,
                                   double max_filtration,
                                   bool double_scale,
                                   struct IcvecDiagram **out);

// Diagram from `n` points given as parallel arrays. Deaths may be `INFINITY`.
//
// # Safety
// The three arrays must hold `n` readable entries; `out` must be writable.
enum IcvecStatus icvec_diagram_new(const size_t *dims,
                                   const double *births,
                                   const double *deaths,
                                   size_t n,
                                   double max_filtration,
                                   struct IcvecDiagram **out);

// Number of points over all dimensions.
//
// # Safety
// `diagram` must be a live handle.
size_t icvec_diagram_len(const struct IcvecDiagram *diagram);

// Point `index` in canonical order.
//
// # Safety
// `diagram` must be a live handle and the out pointers writable.
enum IcvecStatus icvec_diagram_point(const struct IcvecDiagram *diagram,
                                     size_t index,
                                     size_t *dim,
                                     double *birth,
                                     double *death);

// New diagram with infinite deaths replaced by the max filtration.
//
// # Safety
// `diagram` must be a live handle and `out` writable.
enum IcvecStatus icvec_diagram_capped(const struct IcvecDiagram *diagram,
                                      struct IcvecDiagram **out);

// # Safety
// `diagram` must be null or a handle not yet freed.
void icvec_diagram_free(struct IcvecDiagram *diagram);

// Vectorizes the finite off-diagonal points of dimension `dim`. `delta` is
// used by the stable method only, `normalized` by the persistence method only.
//
// # Safety
// `diagram` must be a live handle and `out` writable.
enum IcvecStatus icvec_vectorize(const struct IcvecDiagram *diagram,
                                 enum IcvecMethod method,
                                 size_t dim,
                                 double delta,
                                 bool normalized,
                                 struct IcvecVector **out);

// # Safety
// `vector` must be a live handle.
size_t icvec_vector_len(const struct IcvecVector *vector);

// Copies the (descending) entries into `buf`.
//
// # Safety
// `vector` must be a live handle and `buf` writable for `capacity` doubles.
enum IcvecStatus icvec_vector_values(const struct IcvecVector *vector,
                                     double *buf,
                                     size_t capacity);

// # Safety
// `vector` must be null or a handle not yet freed.
void icvec_vector_free(struct IcvecVector *vector);

// p-Wasserstein distance with L∞ ground cost between the finite points of dimension `dim`.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum IcvecStatus icvec_wasserstein(const struct IcvecDiagram *a,
                                   const struct IcvecDiagram *b,
                                   size_t dim,
                                   double p,
                                   double *out);

// # Safety
// `a` and `b` must be live handles and `out` writable.
enum IcvecStatus icvec_bottleneck(const struct IcvecDiagram *a,
                                  const struct IcvecDiagram *b,
                                  size_t dim,
                                  double *out);

// # Safety
// `a` and `b` must be live handles and `out` writable.
enum IcvecStatus icvec_sliced_wasserstein(const struct IcvecDiagram *a,
                                          const struct IcvecDiagram *b,
                                          size_t dim,
                                          size_t slices,
                                          double *out);

#endif  /* ICVEC_H */
