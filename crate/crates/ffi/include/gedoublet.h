/* Copyright 2026 The gedoublet Authors */
/* SPDX-License-Identifier: Apache-2.0 */

#ifndef GEDOUBLET_H
#define GEDOUBLET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/*
 Result code of every fallible call.
 */
typedef enum GdStatus {
  GD_STATUS_OK = 0,
  GD_STATUS_NULL_POINTER = 1,
  GD_STATUS_INVALID_ARGUMENT = 2,
  GD_STATUS_DOMAIN = 3,
  GD_STATUS_GRID_TOO_COARSE = 4,
  GD_STATUS_DEGENERATE = 5,
  GD_STATUS_CONFIG = 6,
  GD_STATUS_IO = 7,
  /*
   Entanglement is undefined because nothing was ionized.
   */
  GD_STATUS_UNDEFINED = 8,
  GD_STATUS_PANIC = 9,
} GdStatus;

/*
 Pulse and atom parameters.
 */
typedef struct GdParams GdParams;

/*
 Channel amplitudes on an energy grid plus derived quantities.
 */
typedef struct GdResult GdResult;

/*
 Final ionic populations.
 */
typedef struct GdPopulations {
  double p_a;
  double p_b;
  double p_ion;
  double survival2;
} GdPopulations;

/*
 Library version as a static NUL-terminated string.
 */
const char *gd_version(void);

/*
 Copies the calling thread's last error message into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length without the NUL.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t gd_last_error(char *buf, size_t len);

/*
 Helium parameters for envelope `kind` (e.g. `"zero_gaussian"`) with
 absolute pulse area `area_pi * pi` at the reference intensity, resonant,
 depletion on.

 # Safety
 `kind` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum GdStatus gd_params_new(const char *kind, double area_pi, struct GdParams **out);

/*
 Parameters from the text of a TOML run configuration.

 # Safety
 `toml` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum GdStatus gd_params_from_config(const char *toml, struct GdParams **out);

/*
 # Safety
 `p` must be null or a handle from this library that was not yet freed.
 */
void gd_params_free(struct GdParams *p);

/*
 # Safety
 `p` must be a live handle.
 */
enum GdStatus gd_params_set_detuning_ev(struct GdParams *p, double detuning_ev);

/*
 # Safety
 `p` must be a live handle.
 */
enum GdStatus gd_params_set_depletion(struct GdParams *p, bool enabled);

/*
 # Safety
 `p` must be a live handle.
 */
enum GdStatus gd_params_set_cep(struct GdParams *p, double cep_rad);

/*
 Pulse duration parameter in fs.

 # Safety
 `p` must be a live handle and `tau_fs` valid for writes.
 */
enum GdStatus gd_params_tau_fs(const struct GdParams *p, double *tau_fs);

/*
 Runs the full pipeline on a symmetric energy grid of `points` (odd) nodes
 spanning `[-span_ev, span_ev]`.

 # Safety
 `p` must be a live handle and `out` valid for writes.
 */
enum GdStatus gd_compute(const struct GdParams *p,
                         double span_ev,
                         size_t points,
                         struct GdResult **out);

/*
 # Safety
 `r` must be null or a handle from [`gd_compute`] that was not yet freed.
 */
void gd_result_free(struct GdResult *r);

/*
 Number of energy nodes; 0 for a null handle.

 # Safety
 `r` must be null or a live handle.
 */
size_t gd_result_len(const struct GdResult *r);

/*
 Energy nodes in eV.

 # Safety
 `r` must be a live handle and `buf` hold `len >= gd_result_len(r)` doubles.
 */
enum GdStatus gd_result_epsilon_ev(const struct GdResult *r, double *buf, size_t len);

/*
 Ground-channel density `|alpha|^2` (a.u.).

 # Safety
 As for [`gd_result_epsilon_ev`].
 */
enum GdStatus gd_result_alpha_abs2(const struct GdResult *r, double *buf, size_t len);

/*
 Excited-channel density `|beta|^2` (a.u.).

 # Safety
 As for [`gd_result_epsilon_ev`].
 */
enum GdStatus gd_result_beta_abs2(const struct GdResult *r, double *buf, size_t len);

/*
 # Safety
 `r` must be a live handle and `out` valid for writes.
 */
enum GdStatus gd_result_populations(const struct GdResult *r, struct GdPopulations *out);

/*
 Electron-ion entanglement entropy in bits.

 # Safety
 `r` must be a live handle and `out` valid for writes.
 */
enum GdStatus gd_result_entropy(const struct GdResult *r, double *out);

#endif  /* GEDOUBLET_H */
