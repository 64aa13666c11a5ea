/* C interface to the qhecke q-series engine. */

#ifndef QHECKE_H
#define QHECKE_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum QheckeStatus {
  // Success; for verification calls this means every checked identity
  // held exactly.
  QHECKE_OK = 0,
  // Verification ran but at least one identity failed; the report is
  // still written to the out-pointer.
  QHECKE_MISMATCH = 1,
  QHECKE_NULL_ARGUMENT = 2,
  QHECKE_INVALID_UTF8 = 3,
  QHECKE_PARSE_ERROR = 4,
  QHECKE_EVAL_ERROR = 5,
  QHECKE_UNKNOWN_ID = 6,
  QHECKE_CATALOG_ERROR = 7,
  QHECKE_PANIC = 8,
} QheckeStatus;

// Opaque identity-catalog handle.
typedef struct QheckeCatalog QheckeCatalog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Open the built-in catalog, optionally merging extra identities from a
// TOML file (`path` may be null).  On success writes the handle to
// `out_catalog`; on failure writes an error message to `out_error`.
//
// # Safety
// `out_catalog` must be a valid pointer; `path`, if non-null, must be a
// valid NUL-terminated string.
enum QheckeStatus qhecke_catalog_open(const char *path,
                                      struct QheckeCatalog **out_catalog,
                                      char **out_error);

// Release a catalog handle (null is a no-op).
//
// # Safety
// `catalog` must have come from [`qhecke_catalog_open`] and not already be
// freed.
void qhecke_catalog_free(struct QheckeCatalog *catalog);

// Number of identities in the catalog (0 for a null handle).
//
// # Safety
// `catalog` must be a live handle or null.
uintptr_t qhecke_catalog_len(const struct QheckeCatalog *catalog);

// Write a JSON array of `{id, order, ref}` listing the catalog.
//
// # Safety
// `catalog` must be a live handle; `out_json` must be a valid pointer.
enum QheckeStatus qhecke_list_json(const struct QheckeCatalog *catalog, char **out_json);

// Verify one identity; `order <= 0` uses the record's default.  Writes the
// verification report as JSON (even on mismatch).
//
// # Safety
// `catalog` must be a live handle; `id` a valid string; `out_json` a valid
// pointer.
enum QheckeStatus qhecke_verify(const struct QheckeCatalog *catalog,
                                const char *id,
                                int64_t order,
                                char **out_json);

// Verify every identity; `order <= 0` uses each record's default.  Writes
// a JSON array of reports in registry order.
//
// # Safety
// `catalog` must be a live handle; `out_json` a valid pointer.
enum QheckeStatus qhecke_verify_all(const struct QheckeCatalog *catalog,
                                    int64_t order,
                                    char **out_json);

// Expand a DSL expression to the given order and write
// `{"expr","order","terms":[[exponent,"num/den"],...]}`.
//
// # Safety
// `expr` must be a valid string; `out_json` a valid pointer.
enum QheckeStatus qhecke_expand_json(const char *expr, int64_t order, char **out_json);

// Expand a DSL expression and write its human-readable form
// (e.g. `1 - q - q^2 + q^5 + O(q^8)`).
//
// # Safety
// `expr` must be a valid string; `out_text` a valid pointer.
enum QheckeStatus qhecke_expand_text(const char *expr, int64_t order, char **out_text);

// Release a string produced by this library (null is a no-op).
//
// # Safety
// `s` must have been produced by this library and not already be freed.
void qhecke_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QHECKE_H */
