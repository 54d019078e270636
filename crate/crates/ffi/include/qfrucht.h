#ifndef QFRUCHT_H
#define QFRUCHT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QfStatus {
  QF_STATUS_OK = 0,
  QF_STATUS_NULL_POINTER = 1,
  QF_STATUS_INVALID_INPUT = 2,
  QF_STATUS_PARSE = 3,
  // A hypothesis was not met; the call was declined, not broken.
  QF_STATUS_REFUSED = 4,
  QF_STATUS_NUMERICAL = 5,
  QF_STATUS_BUFFER_TOO_SMALL = 6,
  QF_STATUS_PANIC = 7,
} QfStatus;

typedef enum QfVerdict {
  QF_VERDICT_RIGID_INJECTIVE = 0,
  QF_VERDICT_RIGID_NONCENTRAL_SEPARATED = 1,
  QF_VERDICT_INCONCLUSIVE = 2,
} QfVerdict;

// Dual quantum group of a finite group, with its chosen irreducibles.
typedef struct QfDual QfDual;

// Quantum graph on a quantum set.
typedef struct QfGraph QfGraph;

// Finite group.
typedef struct QfGroup QfGroup;

typedef struct QfGraphFlags {
  bool schur_idempotent;
  bool real;
  bool undirected;
  bool loopless;
  bool regular;
  // Meaningful only when `regular`.
  double degree_re;
  double degree_im;
} QfGraphFlags;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qf_version(void);

// Copies the calling thread's last error message into `buf` (NUL-terminated, truncated to
// `len`). Returns the full message length excluding the NUL.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t qf_last_error_message(char *buf, size_t len);

// Group by name: `Z<n>`, `S<n>`, `A<n>`, `D<n>`, `Q8`.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be valid for writes.
enum QfStatus qf_group_named(const char *name, struct QfGroup **out);

// Group from the JSON group-file format.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum QfStatus qf_group_from_json(const char *json, struct QfGroup **out);

// # Safety
// `group` must come from a `qf_group_*` constructor; `order` must be valid for writes.
enum QfStatus qf_group_order(const struct QfGroup *group, size_t *order);

// # Safety
// `group` must be null or an unfreed handle.
void qf_group_free(struct QfGroup *group);

// Dual of `group`; irreducibles come from a seeded decomposition of the regular representation.
//
// # Safety
// `group` must be a live handle; `out` must be valid for writes.
enum QfStatus qf_dual_new(const struct QfGroup *group,
                          uint64_t seed,
                          double tol,
                          struct QfDual **out);

// Dimension of the underlying quantum set (the group order).
//
// # Safety
// `dual` must be a live handle; `dim` must be valid for writes.
enum QfStatus qf_dual_dim(const struct QfDual *dual, size_t *dim);

// Block sizes of the irreducibles, in block order. `count` receives the number of blocks
// even when `dims` is too small.
//
// # Safety
// `dual` must be a live handle; `dims` valid for `len` writes; `count` valid for writes.
enum QfStatus qf_dual_irrep_dims(const struct QfDual *dual,
                                 size_t *dims,
                                 size_t len,
                                 size_t *count);

// # Safety
// `dual` must be null or an unfreed handle.
void qf_dual_free(struct QfDual *dual);

// Cayley graph of a block-basis projection given as `2 * dim` interleaved doubles.
//
// # Safety
// `dual` must be a live handle; `projection` valid for `len` reads; `out` valid for writes.
enum QfStatus qf_cayley_graph(const struct QfDual *dual,
                              const double *projection,
                              size_t len,
                              double tol,
                              struct QfGraph **out);

// Cayley graph of the central projection on the listed irreducible indices.
//
// # Safety
// `dual` must be a live handle; `irreps` valid for `count` reads; `out` valid for writes.
enum QfStatus qf_cayley_central(const struct QfDual *dual,
                                const size_t *irreps,
                                size_t count,
                                double tol,
                                struct QfGraph **out);

// # Safety
// `graph` must be a live handle; `dim` must be valid for writes.
enum QfStatus qf_graph_dim(const struct QfGraph *graph, size_t *dim);

// # Safety
// `graph` must be a live handle; `flags` must be valid for writes.
enum QfStatus qf_graph_flags(const struct QfGraph *graph, struct QfGraphFlags *flags);

// Adjacency matrix in the matrix-unit basis, row-major, `2 * dim * dim` doubles.
//
// # Safety
// `graph` must be a live handle; `out` valid for `len` writes.
enum QfStatus qf_graph_adjacency(const struct QfGraph *graph, double *out, size_t len);

// # Safety
// `graph` must be null or an unfreed handle.
void qf_graph_free(struct QfGraph *graph);

// Seeded random search for a rigid projection. Writes the verdict of the returned trial and,
// when `projection` is non-null, the block-basis projection (`2 * dim` doubles).
// Abelian groups are refused with `QF_STATUS_REFUSED`.
//
// # Safety
// `dual` must be a live handle; `verdict` valid for writes; `projection` null or valid for `len` writes.
enum QfStatus qf_rigid_search(const struct QfDual *dual,
                              uint64_t seed,
                              size_t trials,
                              double tol,
                              enum QfVerdict *verdict,
                              double *projection,
                              size_t len);

// Six interleaved values of the S3 rank-one multiplier at `alpha`, in the order
// e, (1 2), (1 3), (2 3), (1 2 3), (1 3 2).
//
// # Safety
// `out` must be valid for 12 writes.
enum QfStatus qf_s3_rank_one_multiplier(double alpha_re, double alpha_im, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFRUCHT_H */
