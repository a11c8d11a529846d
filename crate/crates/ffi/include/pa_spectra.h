#ifndef PA_SPECTRA_H
#define PA_SPECTRA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  PA_STATUS_OK = 0,
  PA_STATUS_NULL_POINTER = 1,
  PA_STATUS_INVALID_INPUT = 2,
  PA_STATUS_DOMAIN = 3,
  PA_STATUS_CONVERGENCE = 4,
  PA_STATUS_GRID = 5,
  PA_STATUS_CONFIG = 6,
  PA_STATUS_IO = 7,
  PA_STATUS_PANIC = 8,
} PaStatus;

/**
 * Validated run configuration.
 */
typedef struct PaConfig PaConfig;

/**
 * Solved molecular levels together with the configuration that produced them.
 */
typedef struct PaLevels PaLevels;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pa_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
uintptr_t pa_last_error_message(char *buf, uintptr_t len);

/**
 * Sodium defaults.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
PaStatus pa_config_default(PaConfig **out);

/**
 * Parses configuration text in the `key = value` format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid handle slot.
 */
PaStatus pa_config_parse(const char *text, PaConfig **out);

/**
 * Loads a configuration file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid handle slot.
 */
PaStatus pa_config_load(const char *path, PaConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from a `pa_config_*` constructor, not yet freed.
 */
void pa_config_free(PaConfig *cfg);

/**
 * Dimensionless trap energies x_n = ε_n/ħω for n = 0..len-1 at trap frequency
 * `omega_khz` (ordinary frequency, kHz).
 *
 * # Safety
 * `cfg` must be a live handle and `out_x` must point to `len` writable doubles.
 */
PaStatus pa_trap_energies(const PaConfig *cfg, double omega_khz, double *out_x, uintptr_t len);

/**
 * Calibrates the molecular boundary per `cfg` and solves levels v_min..=v_max.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid handle slot.
 */
PaStatus pa_levels_solve(const PaConfig *cfg, int32_t v_min, int32_t v_max, PaLevels **out);

/**
 * Number of levels held by `levels` (0 for null).
 *
 * # Safety
 * `levels` must be null or a live handle.
 */
uintptr_t pa_levels_len(const PaLevels *levels);

/**
 * Level `index`: label, binding energy ε/h (kHz), outer turning point and
 * probability maximum (nm). Null output pointers are skipped.
 *
 * # Safety
 * `levels` must be a live handle; each output pointer must be null or writable.
 */
PaStatus pa_levels_get(const PaLevels *levels,
                       uintptr_t index,
                       int32_t *v,
                       double *binding_khz,
                       double *r_t_nm,
                       double *r_max_nm);

/**
 * |η|² between level `index` and trap state `n_t` at `omega_khz`, using the
 * photon factor of the configuration the levels were solved with.
 *
 * # Safety
 * `levels` must be a live handle and `eta_sq` writable.
 */
PaStatus pa_fc_factor(const PaLevels *levels,
                      uintptr_t index,
                      double omega_khz,
                      uint32_t n_t,
                      double *eta_sq);

/**
 * # Safety
 * `levels` must be null or a handle from [`pa_levels_solve`], not yet freed.
 */
void pa_levels_free(PaLevels *levels);

/**
 * Runs a CLI command (`trap-levels`, `molecular-levels`, `fc`, `linewidths`,
 * `scan`) and writes its files into `out_dir`.
 *
 * # Safety
 * `cfg` must be a live handle; `command` and `out_dir` NUL-terminated strings.
 */
PaStatus pa_run_command(const PaConfig *cfg, const char *command, const char *out_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PA_SPECTRA_H */
