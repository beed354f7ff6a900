#ifndef ENTROPY_ADJOINT_H
#define ENTROPY_ADJOINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EaSide {
  // Right adjoint `G` of the given `F`.
  EA_SIDE_RIGHT = 0,
  // Left adjoint `F` of the given `G`.
  EA_SIDE_LEFT = 1,
} EaSide;

typedef enum EaStatus {
  EA_STATUS_OK = 0,
  // The checked property does not hold (or the requested object does not exist).
  EA_STATUS_PROPERTY_FAILS = 1,
  EA_STATUS_INVALID_INPUT = 2,
  EA_STATUS_NULL_POINTER = 3,
  EA_STATUS_INTERNAL = 4,
} EaStatus;

typedef enum EaStepClass {
  EA_STEP_CLASS_REVERSIBLE = 0,
  EA_STEP_CLASS_IRREVERSIBLE = 1,
  EA_STEP_CLASS_DECREASING = 2,
} EaStepClass;

typedef struct EaConnection EaConnection;

typedef struct EaEngine EaEngine;

typedef struct EaMap EaMap;

// An entropy system or finite order.
typedef struct EaSystem EaSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread, or NULL. Free with
// [`ea_string_free`].
char *ea_last_error(void);

// # Safety
// `s` must come from this library or be NULL.
void ea_string_free(char *s);

// Parses a system or order description (JSON text).
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum EaStatus ea_system_from_json(const char *json, struct EaSystem **out);

// # Safety
// `system` must come from [`ea_system_from_json`] or be NULL.
void ea_system_free(struct EaSystem *system);

// Parses a map from `source` to `target`.
//
// # Safety
// Pointers must be valid; `json` NUL-terminated.
enum EaStatus ea_map_from_json(const char *json,
                               const struct EaSystem *source,
                               const struct EaSystem *target,
                               struct EaMap **out);

// JSON form of a map. Free the result with [`ea_string_free`].
//
// # Safety
// Pointers must be valid.
enum EaStatus ea_map_to_json(const struct EaMap *map, char **out);

// # Safety
// `map` must come from this library or be NULL.
void ea_map_free(struct EaMap *map);

// Checks `left ⊣ right`. Returns `EA_STATUS_OK` when a report was
// produced, whatever its verdict; see [`ea_connection_is_verified`].
//
// # Safety
// Pointers must be valid.
enum EaStatus ea_connection_check(const struct EaMap *left,
                                  const struct EaMap *right,
                                  struct EaConnection **out);

// `EA_STATUS_OK` if both criteria hold, `EA_STATUS_PROPERTY_FAILS` otherwise.
//
// # Safety
// `conn` must be valid.
enum EaStatus ea_connection_is_verified(const struct EaConnection *conn);

// Human-readable report with witnesses. Free with [`ea_string_free`].
//
// # Safety
// Pointers must be valid.
enum EaStatus ea_connection_report(const struct EaConnection *conn, char **out);

// # Safety
// `conn` must come from this library or be NULL.
void ea_connection_free(struct EaConnection *conn);

// Constructs the adjoint on `side`; `EA_STATUS_PROPERTY_FAILS` when none exists.
//
// # Safety
// Pointers must be valid.
enum EaStatus ea_synthesize_adjoint(const struct EaMap *map, enum EaSide side, struct EaMap **out);

// Classifies the step `pre → post` in `system` (labels or rationals as text).
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum EaStatus ea_classify_step(const struct EaSystem *system,
                               const char *pre,
                               const char *post,
                               enum EaStepClass *out);

// # Safety
// `out` must be valid.
enum EaStatus ea_engine_new(double temperature,
                            uint32_t memory_bits,
                            double eta,
                            struct EaEngine **out);

// # Safety
// `engine` must be valid.
enum EaStatus ea_engine_run_cycles(struct EaEngine *engine, uint64_t cycles);

// Erases `n_bits` of memory and writes the expelled heat in joules.
//
// # Safety
// Pointers must be valid.
enum EaStatus ea_engine_erase_memory(struct EaEngine *engine, int64_t n_bits, double *heat_j);

// Ledger of all cycles run so far as CSV. Free with [`ea_string_free`].
//
// # Safety
// Pointers must be valid.
enum EaStatus ea_engine_ledger_csv(const struct EaEngine *engine, char **out);

// `EA_STATUS_OK` if the second-law audit passes.
//
// # Safety
// `engine` must be valid.
enum EaStatus ea_engine_audit(const struct EaEngine *engine);

// # Safety
// `engine` must come from this library or be NULL.
void ea_engine_free(struct EaEngine *engine);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTROPY_ADJOINT_H */
