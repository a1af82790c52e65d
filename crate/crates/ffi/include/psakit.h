#ifndef PSAKIT_H
#define PSAKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PsakitStatus {
  PSAKIT_STATUS_OK = 0,
  PSAKIT_STATUS_DIMENSION = 1,
  PSAKIT_STATUS_NUMERICAL = 2,
  PSAKIT_STATUS_INVALID_POWER = 3,
  PSAKIT_STATUS_INVALID_BASIS = 4,
  PSAKIT_STATUS_COMBINATORIAL_BLOWUP = 5,
  PSAKIT_STATUS_NOT_TOMOGRAPHICALLY_COMPLETE = 6,
  PSAKIT_STATUS_INCONSISTENT_PSA = 7,
  PSAKIT_STATUS_SEARCH_BUDGET = 8,
  PSAKIT_STATUS_NON_EXHAUSTIVE_CONTEXT = 9,
  PSAKIT_STATUS_INVALID_STATE = 10,
  PSAKIT_STATUS_SCHEMA = 11,
  PSAKIT_STATUS_VALIDATION = 12,
  PSAKIT_STATUS_IO = 13,
  PSAKIT_STATUS_NULL_POINTER = 100,
  PSAKIT_STATUS_INVALID_UTF8 = 101,
  PSAKIT_STATUS_PANIC = 102,
} PsakitStatus;

typedef enum PsakitClassification {
  PSAKIT_CLASSIFICATION_ENTANGLED = 0,
  PSAKIT_CLASSIFICATION_INTENSIVE_ONLY = 1,
  PSAKIT_CLASSIFICATION_SEPARABLE = 2,
  PSAKIT_CLASSIFICATION_EFFECTIVE_ONLY_ANOMALY = 3,
} PsakitClassification;

/**
 * Opaque scenario handle.
 */
typedef struct PsakitScenario PsakitScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses scenario JSON into a new handle stored in `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PsakitStatus psakit_scenario_from_json(const char *json, struct PsakitScenario **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `s` must come from `psakit_scenario_from_json` and not be freed twice.
 */
void psakit_scenario_free(struct PsakitScenario *s);

/**
 * Classification only, without building a report.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PsakitStatus psakit_classification(const struct PsakitScenario *s,
                                        enum PsakitClassification *out);

/**
 * Classify report as JSON.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PsakitStatus psakit_classify(const struct PsakitScenario *s, char **out);

/**
 * Sample report as JSON. `shots == 0` falls back to the scenario's
 * sampling block, as does `has_seed == false` for the seed.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PsakitStatus psakit_sample(const struct PsakitScenario *s,
                                uint64_t shots,
                                uint64_t seed,
                                bool has_seed,
                                char **out);

/**
 * Graph report as JSON.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PsakitStatus psakit_graph(const struct PsakitScenario *s, char **out);

/**
 * Binary-valuation search report as JSON. `budget == 0` keeps the
 * configured budget.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PsakitStatus psakit_ks(const struct PsakitScenario *s, uint64_t budget, char **out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void psakit_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *psakit_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *psakit_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSAKIT_H */
