#ifndef TROPIC_H
#define TROPIC_H

/* Generated from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define TROP_OK 0

// A required pointer argument was null.
#define TROP_ERR_NULL 1

// Input text was not valid UTF-8.
#define TROP_ERR_UTF8 2

// The input failed to parse or was inconsistent.
#define TROP_ERR_INVALID 3

// The operation is undefined for this input (domain error).
#define TROP_ERR_DOMAIN 4

// The destination buffer was too small; nothing was copied.
#define TROP_ERR_BUFFER 5

// An internal invariant failed; the handle remains usable.
#define TROP_ERR_PANIC 6

// Sentinel for "not defined" in integer outputs (e.g. the genus in
// ambient dimension above two).
#define TROP_UNDEFINED INT64_MIN

// A sampled point cloud in log/argument/phase coordinates.
typedef struct trop_cloud trop_cloud;

// A complex Laurent polynomial.
typedef struct trop_complex trop_complex;

// The corner locus of a tropical polynomial, with its dual data.
typedef struct trop_locus trop_locus;

// A tropical polynomial (exact rational coefficients).
typedef struct trop_tropical trop_tropical;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf` as a
// NUL-terminated string, truncating if needed, and returns the full
// message length in bytes (excluding the NUL). A zero return means the
// last call on this thread succeeded. `buf` may be null when `cap` is 0.
size_t trop_last_error(char *buf, size_t cap);

// Parses tropical polynomial text (`coeff : e1 … en`, one term per line).
int32_t trop_tropical_parse(const char *text, struct trop_tropical **handle);

// Releases a tropical polynomial handle. Null is a no-op.
void trop_tropical_free(struct trop_tropical *handle);

// Number of variables.
int32_t trop_tropical_ambient_dim(const struct trop_tropical *handle, size_t *n);

// Number of terms.
int32_t trop_tropical_term_count(const struct trop_tropical *handle, size_t *count);

// Canonical text form (round-trips through [`trop_tropical_parse`]).
int32_t trop_tropical_write(const struct trop_tropical *handle,
                            char *buf,
                            size_t cap,
                            size_t *needed);

// Parses complex polynomial text (`re im : e1 … en`, one term per line).
int32_t trop_complex_parse(const char *text, struct trop_complex **handle);

// Releases a complex polynomial handle. Null is a no-op.
void trop_complex_free(struct trop_complex *handle);

// Number of variables.
int32_t trop_complex_ambient_dim(const struct trop_complex *handle, size_t *n);

// Computes the corner locus of a tropical polynomial.
int32_t trop_corner_locus(const struct trop_tropical *poly, struct trop_locus **handle);

// Releases a corner-locus handle. Null is a no-op.
void trop_locus_free(struct trop_locus *handle);

// Number of variables of the ambient space.
int32_t trop_locus_ambient_dim(const struct trop_locus *handle, size_t *n);

// Number of cells of the given dimension.
int32_t trop_locus_cell_count(const struct trop_locus *handle, size_t dim, size_t *count);

// Whether the dual subdivision is a unimodular triangulation (writes 1)
// or not (writes 0).
int32_t trop_locus_is_smooth(const struct trop_locus *handle, int32_t *smooth);

// Copies all 0-cell positions into `buf`, one row of `ambient_dim`
// doubles per vertex. `needed` receives the required double count.
int32_t trop_locus_vertices(const struct trop_locus *handle,
                            double *buf,
                            size_t cap,
                            size_t *needed);

// Pants-decomposition summary of a smooth corner locus. `chi_compact`
// and `genus` receive `TROP_UNDEFINED` when the ambient dimension is
// above two; `conjectural` receives 1 when the Euler characteristic is
// extrapolated beyond curves.
int32_t trop_locus_pants(const struct trop_locus *handle,
                         size_t *nodes,
                         size_t *internal_edges,
                         size_t *legs,
                         int64_t *chi_open,
                         int64_t *chi_compact,
                         int64_t *genus,
                         int32_t *conjectural);

// Samples `k` points of the hypersurface of `poly` at stretch `t > 1`
// inside the log-coordinate box `bounds` (`2n` doubles: lo/hi pairs).
int32_t trop_complex_sample(const struct trop_complex *poly,
                            double t,
                            const double *bounds,
                            size_t k,
                            uint64_t seed,
                            struct trop_cloud **handle);

// Recovers the snapped spine of the amoeba of `poly` as a new tropical
// polynomial handle; `snap_error` (optional) receives the worst
// estimate-to-snap distance.
int32_t trop_complex_spine(const struct trop_complex *poly,
                           double probe_radius,
                           size_t n_samples,
                           uint64_t seed,
                           double *snap_error,
                           struct trop_tropical **handle);

// Releases a point-cloud handle. Null is a no-op.
void trop_cloud_free(struct trop_cloud *handle);

// Number of points in the cloud.
int32_t trop_cloud_len(const struct trop_cloud *handle, size_t *len);

// Doubles per point (`n` log coordinates followed by `n` arguments for
// phase-space clouds).
int32_t trop_cloud_width(const struct trop_cloud *handle, size_t *width);

// Copies the cloud row-major into `buf`; `needed` receives
// `len × width`.
int32_t trop_cloud_points(const struct trop_cloud *handle, double *buf, size_t cap, size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPIC_H */
