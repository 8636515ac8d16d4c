#ifndef DEGMIX_H
#define DEGMIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DegmixStatus {
  DEGMIX_STATUS_OK = 0,
  DEGMIX_STATUS_NULL_POINTER = 1,
  DEGMIX_STATUS_INVALID_ARGUMENT = 2,
  DEGMIX_STATUS_NOT_GRAPHICAL = 3,
  DEGMIX_STATUS_TOO_LARGE = 4,
  DEGMIX_STATUS_DISCONNECTED = 5,
  DEGMIX_STATUS_BUFFER_TOO_SMALL = 6,
  DEGMIX_STATUS_OTHER = 7,
  DEGMIX_STATUS_PANIC = 8,
} DegmixStatus;

/**
 * A running product swap chain.
 */
typedef struct DegmixSampler DegmixSampler;

/**
 * A degree sequence plus optional extra forbidden pairs.
 */
typedef struct DegmixSequence DegmixSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread. Owned by the library and
 * valid until the next call on the same thread.
 */
const char *degmix_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *degmix_version(void);

/**
 * # Safety
 * `degrees` must point to `n` readable values (or be null with `n == 0`);
 * `out` must be writable.
 */
enum DegmixStatus degmix_sequence_simple(const size_t *degrees,
                                         size_t n,
                                         struct DegmixSequence **out);

/**
 * # Safety
 * `u` and `w` must point to `nu` and `nw` readable values; `out` must be
 * writable.
 */
enum DegmixStatus degmix_sequence_bipartite(const size_t *u,
                                            size_t nu,
                                            const size_t *w,
                                            size_t nw,
                                            struct DegmixSequence **out);

/**
 * # Safety
 * `out_degrees` and `in_degrees` must each point to `n` readable values;
 * `out` must be writable.
 */
enum DegmixStatus degmix_sequence_directed(const size_t *out_degrees,
                                           const size_t *in_degrees,
                                           size_t n,
                                           struct DegmixSequence **out);

/**
 * Parses a JSON sequence in the CLI file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DegmixStatus degmix_sequence_from_json(const char *json, struct DegmixSequence **out);

/**
 * Forbids the chord `(u, w)`. Only bipartite and directed sequences accept
 * forbidden pairs.
 *
 * # Safety
 * `seq` must be a live handle.
 */
enum DegmixStatus degmix_sequence_forbid(struct DegmixSequence *seq, size_t u, size_t w);

/**
 * # Safety
 * `seq` must be null or a handle not yet freed.
 */
void degmix_sequence_free(struct DegmixSequence *seq);

/**
 * Writes 1 to `out` when the sequence (with its forbidden pairs) has a
 * realization, 0 otherwise.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum DegmixStatus degmix_is_graphical(const struct DegmixSequence *seq, int32_t *out);

/**
 * Starts a chain at a deterministic realization. `factorize` nonzero runs
 * one chain per canonical component.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum DegmixStatus degmix_sampler_new(const struct DegmixSequence *seq,
                                     uint64_t seed,
                                     int32_t factorize,
                                     struct DegmixSampler **out);

/**
 * Advances the chain by `steps` product steps.
 *
 * # Safety
 * `sampler` must be a live handle.
 */
enum DegmixStatus degmix_sampler_step(struct DegmixSampler *sampler, uint64_t steps);

/**
 * # Safety
 * `sampler` must be a live handle; `out` must be writable.
 */
enum DegmixStatus degmix_sampler_edge_count(const struct DegmixSampler *sampler, size_t *out);

/**
 * Copies the current edges into `buf` as `2 * edge_count` values
 * `a0 b0 a1 b1 ...`. `capacity` counts edges. Returns `BUFFER_TOO_SMALL`
 * (with `written` set to the required edge count) when the buffer is short.
 *
 * # Safety
 * `buf` must have room for `2 * capacity` values; `sampler` must be a live
 * handle; `written` must be writable.
 */
enum DegmixStatus degmix_sampler_edges(const struct DegmixSampler *sampler,
                                       size_t *buf,
                                       size_t capacity,
                                       size_t *written);

/**
 * # Safety
 * `sampler` must be null or a handle not yet freed.
 */
void degmix_sampler_free(struct DegmixSampler *sampler);

/**
 * Draws `count` samples and writes a JSON array of edge lists (0-based
 * pairs) to `out`.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum DegmixStatus degmix_sample_json(const struct DegmixSequence *seq,
                                     uint64_t burn_in,
                                     uint64_t thin,
                                     size_t count,
                                     uint64_t seed,
                                     char **out);

/**
 * Writes the canonical decomposition as JSON: the split components and
 * tail for a simple sequence, the factor list for bipartite and directed
 * ones.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum DegmixStatus degmix_decompose_json(const struct DegmixSequence *seq, char **out);

/**
 * Number of graphical bipartite degree sequences on `n+n` vertices, as a
 * decimal string.
 *
 * # Safety
 * `out` must be writable.
 */
enum DegmixStatus degmix_count_bipartite(size_t n, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void degmix_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEGMIX_H */
