#ifndef SPERNER_H
#define SPERNER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpStatus {
  SP_STATUS_OK = 0,
  SP_STATUS_NULL_POINTER = 1,
  SP_STATUS_INVALID_ARGUMENT = 2,
  SP_STATUS_PARSE = 3,
  SP_STATUS_UNKNOWN_FIXTURE = 4,
  SP_STATUS_CONSTRUCTION_FAILED = 5,
  SP_STATUS_OUT_OF_RANGE = 6,
  SP_STATUS_PANIC = 7,
} SpStatus;

// Opaque partition system.
typedef struct SpSystem SpSystem;

typedef struct SpVerifyInfo {
  bool valid;
  size_t violations;
  size_t wellformed_errors;
} SpVerifyInfo;

// Bounds on the maximum system size. Values above `UINT64_MAX` saturate and
// set the matching flag.
typedef struct SpBounds {
  uint64_t lower;
  uint64_t upper;
  bool lower_saturated;
  bool upper_saturated;
  bool exact;
} SpBounds;

typedef struct SpSearchInfo {
  size_t size;
  bool proven_optimal;
  uint64_t nodes_explored;
  double elapsed_seconds;
  size_t candidates;
} SpSearchInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next library call on the same thread.
const char *sp_last_error(void);

// Library version as a static string.
const char *sp_version(void);

// Loads an embedded fixture system by name (e.g. `"fig1"`).
//
// # Safety
// `name` must be a NUL-terminated string and `out` valid for writes.
enum SpStatus sp_fixture_load(const char *name, struct SpSystem **out);

// Parses a JSON or plain-text system document.
//
// # Safety
// `text` must be a NUL-terminated string and `out` valid for writes.
enum SpStatus sp_parse(const char *text, struct SpSystem **out);

// Builds a verified system for `(n, k)`. `method` may be null for `"auto"`;
// otherwise one of `k2`, `dev-2k1`, `dev-2k2`, `dev-3k1`, `latin-lift`, `extend`.
//
// # Safety
// `method` must be null or NUL-terminated; `out` must be valid for writes.
enum SpStatus sp_construct(size_t n, size_t k, const char *method, struct SpSystem **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `system` must be null or a handle not yet freed.
void sp_system_free(struct SpSystem *system);

// Ground-set size, or 0 for a null handle.
//
// # Safety
// `system` must be null or a live handle.
size_t sp_system_n(const struct SpSystem *system);

// Classes per partition, or 0 for a null handle.
//
// # Safety
// `system` must be null or a live handle.
size_t sp_system_k(const struct SpSystem *system);

// Number of partitions, or 0 for a null handle.
//
// # Safety
// `system` must be null or a live handle.
size_t sp_system_len(const struct SpSystem *system);

// Copies the elements of one class (ascending, 0-based) into `buf`.
// `*len` receives the class size even when `cap` is too small, in which case
// nothing is copied and `OutOfRange` is returned.
//
// # Safety
// `system` must be a live handle, `buf` valid for `cap` writes (may be null
// when `cap` is 0), and `len` valid for writes.
enum SpStatus sp_system_class(const struct SpSystem *system,
                              size_t partition,
                              size_t class_,
                              size_t *buf,
                              size_t cap,
                              size_t *len);

// Checks the Sperner property. A non-Sperner system is not an error.
//
// # Safety
// `system` must be a live handle and `out` valid for writes.
enum SpStatus sp_verify(const struct SpSystem *system, struct SpVerifyInfo *out);

// Serialises to the JSON document format. Free the result with [`sp_string_free`].
//
// # Safety
// `system` must be a live handle and `out` valid for writes.
enum SpStatus sp_serialize_json(const struct SpSystem *system, char **out);

// Serialises to the plain-text format. Free the result with [`sp_string_free`].
//
// # Safety
// `system` must be a live handle and `out` valid for writes.
enum SpStatus sp_serialize_text(const struct SpSystem *system, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void sp_string_free(char *s);

// Best known lower and upper bounds for `(n, k)`.
//
// # Safety
// `out` must be valid for writes.
enum SpStatus sp_bounds(size_t n, size_t k, struct SpBounds *out);

// Maximum-clique search over `k`-partitions of `0..n` with every class of at
// least `min_class_size` elements. `time_limit_seconds <= 0` means no limit;
// `target == 0` means no early stop. `best` may be null if the witness is not
// wanted.
//
// # Safety
// `info` must be valid for writes; `best` null or valid for writes.
enum SpStatus sp_search(size_t n,
                        size_t k,
                        size_t min_class_size,
                        double time_limit_seconds,
                        size_t target,
                        struct SpSearchInfo *info,
                        struct SpSystem **best);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPERNER_H */
