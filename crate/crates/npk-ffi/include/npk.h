#ifndef NPK_H
#define NPK_H

#pragma once

/* Generated by cbindgen from npk-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes shared with the CLI: 0 success, 1 parse error, 2 not an
 n-potent, 3 field violation, 4 verification failure.
 */
typedef enum NpkStatus {
  NpkStatus_Ok = 0,
  NpkStatus_ParseError = 1,
  NpkStatus_NotNpotent = 2,
  NpkStatus_FieldViolation = 3,
  NpkStatus_VerificationFailed = 4,
  NpkStatus_InvalidArgument = 5,
  NpkStatus_InternalError = 6,
} NpkStatus;

/*
 Opaque matrix handle.
 */
typedef struct NpkMatrix NpkMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 # Safety
 `ptr` must be null or a pointer previously returned by this library's
 string-producing functions.
 */
void npk_string_free(char *ptr);

/*
 Last error message for the current thread, or null if none; free with
 [`npk_string_free`].
 */
char *npk_last_error(void);

/*
 Parse a matrix from its JSON form `{"m": ..., "rows": [[...], ...]}`.

 # Safety
 `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum NpkStatus npk_matrix_from_json(const char *json, struct NpkMatrix **out);

/*
 Serialize a matrix handle back to JSON; null on error.

 # Safety
 `m` must be a live handle from this library.
 */
char *npk_matrix_to_json(const struct NpkMatrix *m);

/*
 # Safety
 `m` must be null or a live handle; the handle is invalid afterwards.
 */
void npk_matrix_free(struct NpkMatrix *m);

/*
 # Safety
 `m` must be a live handle.
 */
size_t npk_matrix_rows(const struct NpkMatrix *m);

/*
 # Safety
 `m` must be a live handle.
 */
size_t npk_matrix_cols(const struct NpkMatrix *m);

/*
 Field conductor of the matrix.

 # Safety
 `m` must be a live handle.
 */
uint64_t npk_matrix_order(const struct NpkMatrix *m);

/*
 Exact test of `e^n = e`.

 # Safety
 `m` must be a live handle and `out` a valid pointer.
 */
enum NpkStatus npk_is_npotent(const struct NpkMatrix *m, uint32_t n, bool *out);

/*
 Decompose into the n-partition of unity; the partition is returned as
 JSON (`{"n": ..., "m": ..., "components": [...]}`).

 # Safety
 `m` must be a live handle and `out_json` a valid pointer.
 */
enum NpkStatus npk_decompose_json(const struct NpkMatrix *m, uint32_t n, char **out_json);

/*
 Number of Galois orbits (= number of class coordinates) for `(n, field)`.

 # Safety
 `out` must be a valid pointer.
 */
enum NpkStatus npk_orbit_count(uint32_t n, uint64_t field, size_t *out);

/*
 K-class of an n-potent over the base field: one value per Galois orbit,
 written into `values` (capacity `len`); `written` receives the count.

 # Safety
 `m` must be a live handle; `values` must point to at least `len`
 writable slots; `written` must be valid.
 */
enum NpkStatus npk_class_of(const struct NpkMatrix *m,
                            uint32_t n,
                            uint64_t field,
                            int64_t *values,
                            size_t len,
                            size_t *written);

/*
 Rendered group structure, e.g. `"Z (+) 2Z"`; free with
 [`npk_string_free`].
 */
char *npk_group_structure(uint32_t n, uint64_t field);

/*
 Exact similarity decision for two n-potents of equal size.

 # Safety
 `e` and `f` must be live handles and `out` valid.
 */
enum NpkStatus npk_are_similar(const struct NpkMatrix *e,
                               const struct NpkMatrix *f,
                               uint32_t n,
                               bool *out);

/*
 Stable-class equality over the base field (sizes may differ).

 # Safety
 `e` and `f` must be live handles and `out` valid.
 */
enum NpkStatus npk_same_kclass(const struct NpkMatrix *e,
                               const struct NpkMatrix *f,
                               uint32_t n,
                               uint64_t field,
                               bool *out);

/*
 Block-diagonal n-potent realizing the class with the given orbit values.

 # Safety
 `values` must point to `len` readable values; `out` must be valid.
 */
enum NpkStatus npk_representative(uint32_t n,
                                  uint64_t field,
                                  const int64_t *values,
                                  size_t len,
                                  struct NpkMatrix **out);

/*
 Deterministic random n-potent with the prescribed component ranks
 (`ranks[k]` for `k = 0..n-1`, summing to `size`).

 # Safety
 `ranks` must point to `ranks_len` readable values; `out` must be valid.
 */
enum NpkStatus npk_random_npotent(uint32_t n,
                                  uint64_t field,
                                  size_t size,
                                  const size_t *ranks,
                                  size_t ranks_len,
                                  uint64_t seed,
                                  struct NpkMatrix **out);

/*
 Verify a witness JSON document (either kind); `Ok` means every identity
 held exactly.

 # Safety
 `json` must be a valid NUL-terminated string.
 */
enum NpkStatus npk_witness_check_json(const char *json);

/*
 Traces of the quadripotent split `(e_1, e_2 + e_3)` over `Q(i)`.

 # Safety
 `m` must be a live handle; `trace_e1` and `trace_e23` must be valid.
 */
enum NpkStatus npk_quadripotent_split_traces(const struct NpkMatrix *m,
                                             int64_t *trace_e1,
                                             int64_t *trace_e23);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NPK_H */
