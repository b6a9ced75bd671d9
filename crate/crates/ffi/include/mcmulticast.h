#ifndef MCMULTICAST_H
#define MCMULTICAST_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McmStatus {
  MCM_STATUS_OK = 0,
  MCM_STATUS_INVALID_INPUT = 1,
  MCM_STATUS_NULL_POINTER = 2,
  MCM_STATUS_CAP_EXCEEDED = 3,
  MCM_STATUS_PARSE = 4,
  MCM_STATUS_CONFIG = 5,
  MCM_STATUS_PANIC = 6,
} McmStatus;

typedef enum McmPolicy {
  MCM_POLICY_CGA = 0,
  MCM_POLICY_DGA = 1,
  MCM_POLICY_SC = 2,
  MCM_POLICY_MBSFN = 3,
  MCM_POLICY_EXACT = 4,
} McmPolicy;

/**
 * Opaque allocation problem.
 */
typedef struct McmInstance McmInstance;

/**
 * Opaque solver output.
 */
typedef struct McmResult McmResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *mcm_version(void);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *mcm_last_error_message(void);

/**
 * Empty instance with every `U_jc` empty.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum McmStatus mcm_instance_new(size_t num_users,
                                size_t num_cells,
                                size_t num_prbs,
                                struct McmInstance **out);

/**
 * Parses the `instance M C N` / `c j : users` text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum McmStatus mcm_instance_parse(const char *text, struct McmInstance **out);

/**
 * Adds `user` to the set of `prb` in `cell`.
 *
 * # Safety
 * `inst` must be a live handle from this library.
 */
enum McmStatus mcm_instance_insert(struct McmInstance *inst, size_t cell, size_t prb, size_t user);

/**
 * # Safety
 * `inst` must be null or a live handle; it is invalid afterwards.
 */
void mcm_instance_free(struct McmInstance *inst);

/**
 * Solves with `policy`. For `EXACT`, `exact_cap` bounds the number of
 * candidate allocations; 0 selects the default cap. `SC` expects users to
 * be eligible only at their primary cell.
 *
 * # Safety
 * `inst` must be a live handle and `out` writable.
 */
enum McmStatus mcm_solve(const struct McmInstance *inst,
                         enum McmPolicy policy,
                         uint64_t exact_cap,
                         struct McmResult **out);

/**
 * Number of served users; 0 for a null handle.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
size_t mcm_result_served_count(const struct McmResult *res);

/**
 * Number of cells in the allocation; 0 for a null handle.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
size_t mcm_result_num_cells(const struct McmResult *res);

/**
 * PRB chosen in `cell`.
 *
 * # Safety
 * `res` must be a live handle and `out` writable.
 */
enum McmStatus mcm_result_chosen_prb(const struct McmResult *res, size_t cell, size_t *out);

/**
 * Whether `user` is served; false for a null handle or out-of-range user.
 *
 * # Safety
 * `res` must be null or a live handle.
 */
bool mcm_result_is_served(const struct McmResult *res, size_t user);

/**
 * # Safety
 * `res` must be null or a live handle; it is invalid afterwards.
 */
void mcm_result_free(struct McmResult *res);

/**
 * Urban-macro path loss in dB at `distance_km`, with the default
 * minimum-distance clamp.
 */
double mcm_path_loss_db(double distance_km);

/**
 * Per-PRB SNR in dB under the default link budget.
 */
double mcm_snr_db(double distance_km, double shadow_db, double fast_fade_db);

/**
 * Runs the experiment described by a flat `key=value` config (same keys
 * as the command-line flags) without writing files, and returns its
 * metrics as JSON. Free the string with [`mcm_string_free`].
 *
 * # Safety
 * `config` must be a nul-terminated string and `out_json` writable.
 */
enum McmStatus mcm_run_config(const char *config, char **out_json);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void mcm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCMULTICAST_H */
