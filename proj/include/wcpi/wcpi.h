// Copyright 2026 The wcpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the wcpi library. All objects are opaque handles released
 * with their *_free function. Functions return a wcpi_status; on failure a
 * message is available from wcpi_last_error() on the calling thread. */
#ifndef WCPI_WCPI_H
#define WCPI_WCPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(WCPI_BUILDING_LIBRARY)
#define WCPI_API __attribute__((visibility("default")))
#else
#define WCPI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wcpi_status {
    WCPI_OK = 0,
    WCPI_ERR_ARGUMENT = 1, /* null pointer, bad enum, buffer misuse */
    WCPI_ERR_CONFIG = 2,   /* invalid scenario or option */
    WCPI_ERR_IO = 3,       /* file could not be read or written */
    WCPI_ERR_INTERNAL = 4, /* invariant breach inside the library */
    WCPI_ERR_DOMAIN = 5,   /* argument outside a function's domain */
    WCPI_ERR_LOOKUP = 6,   /* unknown name (builtin, column, ...) */
    WCPI_ERR_INPUT = 7,    /* malformed or insufficient data */
} wcpi_status;

typedef struct wcpi_scenario wcpi_scenario;
typedef struct wcpi_scan wcpi_scan;
typedef struct wcpi_fit wcpi_fit;
typedef struct wcpi_tags wcpi_tags;

WCPI_API const char *wcpi_last_error(void);
WCPI_API const char *wcpi_version(void);

/* ---- photon statistics -------------------------------------------------- */

typedef struct wcpi_far_rates {
    double singles_avg_hz;
    double coincidence_avg_hz;
    double singles_max_hz;
    double two_photon_singles_max_hz;
} wcpi_far_rates;

WCPI_API wcpi_status wcpi_poisson_pmf(int n, double mean, double *out);
WCPI_API wcpi_status wcpi_pmf_ratio(int n, double mean, double *out);
WCPI_API wcpi_status wcpi_default_truncation(double mean, int *out);
WCPI_API wcpi_status wcpi_far_rates_compute(double mean, double rep_rate_hz, wcpi_far_rates *out);

/* ---- scenarios ---------------------------------------------------------- */

WCPI_API size_t wcpi_builtin_count(void);
/* NULL when index is out of range. */
WCPI_API const char *wcpi_builtin_name(size_t index);

WCPI_API wcpi_status wcpi_scenario_builtin(const char *name, wcpi_scenario **out);
WCPI_API wcpi_status wcpi_scenario_from_json(const char *json, wcpi_scenario **out);
WCPI_API wcpi_status wcpi_scenario_load(const char *path, wcpi_scenario **out);
/* Merges a JSON object into the scenario in place. */
WCPI_API wcpi_status wcpi_scenario_apply_json(wcpi_scenario *scenario, const char *json);
/* Writes a NUL-terminated JSON document into buf (if capacity allows) and
 * the required size including the terminator into *needed. */
WCPI_API wcpi_status wcpi_scenario_to_json(const wcpi_scenario *scenario, char *buf, size_t capacity,
                                           size_t *needed);
/* *errors / *warnings receive the violation counts; messages (one per line,
 * "error: field: text") go to buf as in wcpi_scenario_to_json. */
WCPI_API wcpi_status wcpi_scenario_validate(const wcpi_scenario *scenario, size_t *errors, size_t *warnings,
                                            char *buf, size_t capacity, size_t *needed);
WCPI_API const char *wcpi_scenario_name(const wcpi_scenario *scenario);
/* Grid points of the scenario's own grid: pass out=NULL to query *count. */
WCPI_API wcpi_status wcpi_scenario_grid(const wcpi_scenario *scenario, double *out, size_t capacity,
                                        size_t *count);
WCPI_API void wcpi_scenario_free(wcpi_scenario *scenario);

/* Inclusive grid start, start+step, ... <= stop. */
WCPI_API wcpi_status wcpi_make_grid(double start_mm, double stop_mm, double step_mm, double *out, size_t capacity,
                                    size_t *count);

/* ---- fringe scans --------------------------------------------------------- */

WCPI_API wcpi_status wcpi_reference_curve(const wcpi_scenario *scenario, const double *grid, size_t points,
                                          wcpi_scan **out);

typedef struct wcpi_mc_options {
    uint64_t pulses;
    uint64_t seed;
    unsigned workers;         /* 0 = hardware concurrency */
    int engine_photon_level;  /* nonzero selects the photon-level oracle */
} wcpi_mc_options;

WCPI_API wcpi_status wcpi_sweep(const wcpi_scenario *scenario, const double *grid, size_t points,
                                const wcpi_mc_options *options, wcpi_scan **out);
/* Adds analytic_<column> columns computed for the scan's own grid. */
WCPI_API wcpi_status wcpi_scan_attach_analytic(wcpi_scan *scan, const wcpi_scenario *scenario);

WCPI_API wcpi_status wcpi_scan_read_csv(const char *path, wcpi_scan **out);
WCPI_API wcpi_status wcpi_scan_write_csv(const wcpi_scan *scan, const char *path);
WCPI_API wcpi_status wcpi_scan_write_svg(const wcpi_scan *scan, const char *path);
WCPI_API size_t wcpi_scan_rows(const wcpi_scan *scan);
/* Columns are dx_mm first, then the rate columns, then exposure_s if any. */
WCPI_API size_t wcpi_scan_column_count(const wcpi_scan *scan);
WCPI_API const char *wcpi_scan_column_name(const wcpi_scan *scan, size_t index);
WCPI_API wcpi_status wcpi_scan_values(const wcpi_scan *scan, const char *column, double *out, size_t capacity);
WCPI_API void wcpi_scan_free(wcpi_scan *scan);

/* ---- time tags and coincidences ----------------------------------------- */

WCPI_API wcpi_status wcpi_simulate_point_tags(const wcpi_scenario *scenario, double dx_mm, uint64_t pulses,
                                              uint64_t seed, wcpi_tags **out);
WCPI_API wcpi_status wcpi_tags_read_csv(const char *path, wcpi_tags **out);
WCPI_API wcpi_status wcpi_tags_write_csv(const wcpi_tags *tags, const char *path);
WCPI_API size_t wcpi_tags_count(const wcpi_tags *tags);
/* Run length recorded with simulated tags; 0 for tags read from a file. */
WCPI_API double wcpi_tags_duration(const wcpi_tags *tags);
WCPI_API void wcpi_tags_free(wcpi_tags *tags);

typedef struct wcpi_coincidence_config {
    int channel_a;
    int channel_b;
    double window_ns;
    double delay_ns;
    double duration_s; /* <= 0: up to the last tag */
} wcpi_coincidence_config;

typedef struct wcpi_coincidence_result {
    uint64_t pair_count;
    double duration_s;
    double rate_hz;
} wcpi_coincidence_result;

WCPI_API wcpi_status wcpi_count_coincidences(const wcpi_tags *tags, const wcpi_coincidence_config *config,
                                             wcpi_coincidence_result *out);
WCPI_API wcpi_status wcpi_accidental_rate(double singles_a_hz, double singles_b_hz, double rep_rate_hz,
                                          double *out);

/* ---- fitting ---------------------------------------------------------------- */

typedef struct wcpi_fit_options {
    int port_sign;          /* +1 or -1, one-photon model only; 0 means +1 */
    int fit_wavelength;     /* nonzero frees lambda for oscillating models */
    double wavelength_nm;   /* <= 0: 775 */
    int pin_sigma;
    double sigma_mm;
    int pin_x0;
    double x0_mm;
} wcpi_fit_options;

/* model: opi, tpi, hom_dip, hom_peak or dual_mzi. options may be NULL. */
WCPI_API wcpi_status wcpi_fit_scan(const wcpi_scan *scan, const char *column, const char *model,
                                   const wcpi_fit_options *options, wcpi_fit **out);
WCPI_API wcpi_status wcpi_fit_to_json(const wcpi_fit *fit, char *buf, size_t capacity, size_t *needed);
WCPI_API int wcpi_fit_converged(const wcpi_fit *fit);
/* name: n_max, v1, v2, sigma_mm, x0_mm, wavelength_nm, fwhm_mm, visibility,
 * rss; "<param>_err" gives a standard error. */
WCPI_API wcpi_status wcpi_fit_param(const wcpi_fit *fit, const char *name, double *out);
WCPI_API void wcpi_fit_free(wcpi_fit *fit);

#ifdef __cplusplus
}
#endif

#endif
