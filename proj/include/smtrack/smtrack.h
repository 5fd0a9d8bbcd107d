/* SPDX-License-Identifier: Apache-2.0
 *
 * smtrack: soft multipath information UWB tracking
 * Copyright (C) 2026 The smtrack authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 */

#ifndef SMTRACK_SMTRACK_H
#define SMTRACK_SMTRACK_H

/* C interface of libsmtrack.
 *
 * Every call returns an smt_status. On failure a diagnostic for the calling
 * thread is available from smt_last_error() until the next failing call.
 * Objects are opaque handles released with the matching *_free function;
 * passing NULL to a *_free function is a no-op. */

#include <stddef.h>
#include <stdint.h>

#if defined(SMTRACK_BUILDING_LIBRARY)
#define SMT_API __attribute__((visibility("default")))
#else
#define SMT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smt_status
{
    SMT_OK = 0,
    SMT_ERR_INVALID_ARGUMENT = 1,
    SMT_ERR_CONFIG = 2,
    SMT_ERR_IO = 3,
    SMT_ERR_PARSE = 4,
    SMT_ERR_NUMERIC = 5,
    SMT_ERR_INTERNAL = 6
} smt_status;

typedef struct smt_scenario smt_scenario;
typedef struct smt_result smt_result;
typedef struct smt_tracker smt_tracker;

SMT_API const char *smt_version(void);
SMT_API const char *smt_status_string(smt_status status);
/* Never NULL; empty when the thread has not seen an error. */
SMT_API const char *smt_last_error(void);
SMT_API void smt_string_free(char *s);

/* ---- scenarios ---------------------------------------------------------- */

SMT_API smt_status smt_scenario_load(const char *path, smt_scenario **out);
SMT_API smt_status smt_scenario_parse(const char *json_text, smt_scenario **out);
/* Built-in warehouse scenario with 3 or 4 anchors. */
SMT_API smt_status smt_scenario_default(int num_anchors, smt_scenario **out);
SMT_API void smt_scenario_free(smt_scenario *scenario);

SMT_API smt_status smt_scenario_set_seed(smt_scenario *scenario, uint64_t seed);
SMT_API smt_status smt_scenario_set_runs(smt_scenario *scenario, int num_runs);
/* Comma separated: baseline, proposed_los_only, proposed_smc. */
SMT_API smt_status smt_scenario_set_trackers(smt_scenario *scenario, const char *list);
SMT_API smt_status smt_scenario_num_anchors(const smt_scenario *scenario, size_t *out);
/* *out is released with smt_string_free. */
SMT_API smt_status smt_scenario_to_json(const smt_scenario *scenario, char **out);

/* ---- batch runs --------------------------------------------------------- */

typedef struct smt_summary
{
    const char *tracker; /* owned by the result */
    double median_m;
    double p90_m;
    double p95_m;
    size_t n_samples;
} smt_summary;

typedef struct smt_run_info
{
    const char *tracker; /* owned by the result */
    int run;
    size_t num_records;
    uint64_t stream_checksum;
} smt_run_info;

typedef struct smt_record
{
    double t;
    double x_true, y_true; /* NaN without ground truth */
    double x_est, y_est;
    double error_m; /* NaN without ground truth */
} smt_record;

/* Writes cir_runNNN.txt and truth_runNNN.csv per Monte Carlo run. */
SMT_API smt_status smt_simulate(const smt_scenario *scenario, const char *out_dir);

/* Writes traj_<tracker>_runNNN.csv. With cir_path set, replays that record
 * file instead of synthesizing; truth_path (nullable) adds ground truth.
 * out may be NULL. */
SMT_API smt_status smt_track(const smt_scenario *scenario, const char *out_dir, const char *cir_path,
                             const char *truth_path, smt_result **out);

/* Simulate, track and summarize. With out_dir set, trajectories and
 * metrics.json are written there (and CIR records when dump_cir != 0). */
SMT_API smt_status smt_run(const smt_scenario *scenario, const char *out_dir, int dump_cir, smt_result **out);

/* Summarizes a trajectory CSV, or every traj_*.csv in a directory. With
 * metrics_path set, the summary is also written there as JSON. */
SMT_API smt_status smt_evaluate(const char *in_path, const char *metrics_path, smt_result **out);

SMT_API size_t smt_result_summary_count(const smt_result *result);
SMT_API smt_status smt_result_summary(const smt_result *result, size_t index, smt_summary *out);
SMT_API size_t smt_result_run_count(const smt_result *result);
SMT_API smt_status smt_result_run_info(const smt_result *result, size_t index, smt_run_info *out);
SMT_API smt_status smt_result_record(const smt_result *result, size_t run_index, size_t record_index,
                                     smt_record *out);
SMT_API smt_status smt_result_write_metrics(const smt_result *result, const char *path);
/* Metrics JSON text; *out is released with smt_string_free. */
SMT_API smt_status smt_result_metrics_json(const smt_result *result, char **out);
SMT_API void smt_result_free(smt_result *result);

/* ---- online tracking ---------------------------------------------------- */

typedef struct smt_cir
{
    int anchor_id;
    double timestamp;   /* s */
    double tap_spacing; /* s */
    const double *taps; /* magnitudes */
    size_t num_taps;
} smt_cir;

/* Soft multipath tracker over the scenario floor plan and tracker settings.
 * use_smc = 0 restricts the likelihood to line-of-sight links. */
SMT_API smt_status smt_tracker_create(const smt_scenario *scenario, int use_smc, uint64_t seed, smt_tracker **out);
SMT_API smt_status smt_tracker_initialize(smt_tracker *tracker, double x, double y);
/* Correction only, for the first epoch. */
SMT_API smt_status smt_tracker_update(smt_tracker *tracker, const smt_cir *profiles, size_t num_profiles,
                                      double *x_out, double *y_out);
SMT_API smt_status smt_tracker_step(smt_tracker *tracker, const smt_cir *profiles, size_t num_profiles, double dt,
                                    double *x_out, double *y_out);
SMT_API smt_status smt_tracker_particles(const smt_tracker *tracker, size_t *count_out);
SMT_API void smt_tracker_free(smt_tracker *tracker);

/* ---- utilities ---------------------------------------------------------- */

/* Mirror image of (ax, ay) across the line through the reflector endpoints. */
SMT_API smt_status smt_mirror_point(double ax, double ay, double r1x, double r1y, double r2x, double r2y,
                                    double *x_out, double *y_out);
/* Nearest-rank percentile, q in (0, 100]. */
SMT_API smt_status smt_percentile(const double *values, size_t n, double q, double *out);

#ifdef __cplusplus
}
#endif

#endif
