// SPDX-License-Identifier: Apache-2.0
//
// smtrack: soft multipath information UWB tracking
// Copyright (C) 2026 The smtrack authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "smtrack/smtrack.h"

#include "smtrack/cir_io.hpp"
#include "smtrack/harness.hpp"
#include "smtrack/scenario.hpp"
#include "smtrack/tracker.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

struct smt_scenario
{
    smtrack::ScenarioConfig cfg;
};

struct smt_result
{
    std::vector<smtrack::TrackerRun> runs;
    std::vector<smtrack::ErrorSummary> summary;
    std::vector<std::string> run_names;
};

struct smt_tracker
{
    std::unique_ptr<smtrack::SoftMultipathTracker> impl;
};

namespace
{
thread_local std::string g_last_error;

smt_status fail(smt_status status, const std::string &msg)
{
    g_last_error = msg;
    return status;
}

template <typename F> smt_status guarded(F &&body)
{
    try
    {
        body();
        return SMT_OK;
    }
    catch (const smtrack::ConfigError &e)
    {
        return fail(SMT_ERR_CONFIG, e.what());
    }
    catch (const smtrack::ParseError &e)
    {
        return fail(SMT_ERR_PARSE, e.what());
    }
    catch (const smtrack::IoError &e)
    {
        return fail(SMT_ERR_IO, e.what());
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        return fail(SMT_ERR_IO, e.what());
    }
    catch (const std::domain_error &e)
    {
        return fail(SMT_ERR_NUMERIC, e.what());
    }
    catch (const std::range_error &e)
    {
        return fail(SMT_ERR_NUMERIC, e.what());
    }
    catch (const std::overflow_error &e)
    {
        return fail(SMT_ERR_NUMERIC, e.what());
    }
    catch (const std::logic_error &e)
    {
        return fail(SMT_ERR_INVALID_ARGUMENT, e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(SMT_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(SMT_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(SMT_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char *msg)
{
    if (!ok)
        throw std::invalid_argument(msg);
}

smt_result *make_result(std::vector<smtrack::TrackerRun> runs, std::vector<smtrack::ErrorSummary> summary)
{
    auto r = std::make_unique<smt_result>();
    r->runs = std::move(runs);
    r->summary = std::move(summary);
    for (const auto &run : r->runs)
        r->run_names.emplace_back(smtrack::to_string(run.kind));
    return r.release();
}

std::vector<smtrack::CirProfile> to_profiles(const smt_cir *profiles, size_t n)
{
    require(profiles != nullptr || n == 0, "profiles is NULL");
    std::vector<smtrack::CirProfile> out(n);
    for (size_t i = 0; i < n; ++i)
    {
        require(profiles[i].taps != nullptr || profiles[i].num_taps == 0, "profile taps is NULL");
        out[i].anchor_id = profiles[i].anchor_id;
        out[i].timestamp = profiles[i].timestamp;
        out[i].tap_spacing = profiles[i].tap_spacing;
        out[i].taps.assign(profiles[i].taps, profiles[i].taps + profiles[i].num_taps);
    }
    return out;
}

char *copy_string(const std::string &text)
{
    char *buf = static_cast<char *>(std::malloc(text.size() + 1));
    if (!buf)
        throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return buf;
}

void put_position(const smtrack::TagState &s, double *x, double *y)
{
    if (x)
        *x = s.position.x;
    if (y)
        *y = s.position.y;
}
} // namespace

extern "C" {

const char *smt_version(void) { return "0.1.0"; }

const char *smt_status_string(smt_status status)
{
    switch (status)
    {
    case SMT_OK:
        return "ok";
    case SMT_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case SMT_ERR_CONFIG:
        return "configuration error";
    case SMT_ERR_IO:
        return "i/o error";
    case SMT_ERR_PARSE:
        return "parse error";
    case SMT_ERR_NUMERIC:
        return "numeric error";
    case SMT_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

const char *smt_last_error(void) { return g_last_error.c_str(); }

void smt_string_free(char *s) { std::free(s); }

smt_status smt_scenario_load(const char *path, smt_scenario **out)
{
    return guarded([&] {
        require(path && out, "path and out must be non-NULL");
        auto s = std::make_unique<smt_scenario>();
        s->cfg = smtrack::load_scenario(path);
        *out = s.release();
    });
}

smt_status smt_scenario_parse(const char *json_text, smt_scenario **out)
{
    return guarded([&] {
        require(json_text && out, "json_text and out must be non-NULL");
        auto s = std::make_unique<smt_scenario>();
        s->cfg = smtrack::parse_scenario(json_text);
        *out = s.release();
    });
}

smt_status smt_scenario_default(int num_anchors, smt_scenario **out)
{
    return guarded([&] {
        require(out != nullptr, "out must be non-NULL");
        auto s = std::make_unique<smt_scenario>();
        s->cfg = smtrack::default_scenario(num_anchors);
        *out = s.release();
    });
}

void smt_scenario_free(smt_scenario *scenario) { delete scenario; }

smt_status smt_scenario_set_seed(smt_scenario *scenario, uint64_t seed)
{
    return guarded([&] {
        require(scenario != nullptr, "scenario is NULL");
        scenario->cfg.rng_seed = seed;
    });
}

smt_status smt_scenario_set_runs(smt_scenario *scenario, int num_runs)
{
    return guarded([&] {
        require(scenario != nullptr, "scenario is NULL");
        if (num_runs < 1)
            throw smtrack::ConfigError("num_monte_carlo_runs must be >= 1");
        scenario->cfg.num_monte_carlo_runs = num_runs;
    });
}

smt_status smt_scenario_set_trackers(smt_scenario *scenario, const char *list)
{
    return guarded([&] {
        require(scenario && list, "scenario and list must be non-NULL");
        scenario->cfg.trackers_to_run = smtrack::parse_tracker_list(list);
    });
}

smt_status smt_scenario_num_anchors(const smt_scenario *scenario, size_t *out)
{
    return guarded([&] {
        require(scenario && out, "scenario and out must be non-NULL");
        *out = scenario->cfg.floor_plan.anchors.size();
    });
}

smt_status smt_scenario_to_json(const smt_scenario *scenario, char **out)
{
    return guarded([&] {
        require(scenario && out, "scenario and out must be non-NULL");
        *out = copy_string(smtrack::scenario_to_json(scenario->cfg));
    });
}

smt_status smt_simulate(const smt_scenario *scenario, const char *out_dir)
{
    return guarded([&] {
        require(scenario && out_dir, "scenario and out_dir must be non-NULL");
        smtrack::simulate_to_directory(scenario->cfg, out_dir);
    });
}

smt_status smt_track(const smt_scenario *scenario, const char *out_dir, const char *cir_path, const char *truth_path,
                     smt_result **out)
{
    return guarded([&] {
        require(scenario && out_dir, "scenario and out_dir must be non-NULL");
        require(cir_path || !truth_path, "truth_path requires cir_path");
        std::optional<std::string> cir, truth;
        if (cir_path)
            cir = cir_path;
        if (truth_path)
            truth = truth_path;
        auto runs = smtrack::track_to_directory(scenario->cfg, out_dir, cir, truth);
        if (out)
        {
            auto summary = smtrack::summarize(runs, scenario->cfg.trackers_to_run);
            *out = make_result(std::move(runs), std::move(summary));
        }
    });
}

smt_status smt_run(const smt_scenario *scenario, const char *out_dir, int dump_cir, smt_result **out)
{
    return guarded([&] {
        require(scenario != nullptr, "scenario is NULL");
        require(out_dir || out, "need an output directory or a result handle");
        smtrack::TrackResult r = out_dir ? smtrack::run_to_directory(scenario->cfg, out_dir, dump_cir != 0)
                                         : smtrack::run_scenario(scenario->cfg);
        if (out)
            *out = make_result(std::move(r.runs), std::move(r.summary));
    });
}

smt_status smt_evaluate(const char *in_path, const char *metrics_path, smt_result **out)
{
    return guarded([&] {
        require(in_path != nullptr, "in_path is NULL");
        std::vector<std::string> files;
        if (std::filesystem::is_directory(in_path))
        {
            files = smtrack::find_trajectory_files(in_path);
            if (files.empty())
                throw smtrack::IoError(std::string("no traj_*.csv files in '") + in_path + "'");
        }
        else
        {
            if (!std::filesystem::exists(in_path))
                throw smtrack::IoError(std::string("'") + in_path + "' does not exist");
            files.emplace_back(in_path);
        }
        auto summary = smtrack::evaluate_trajectory_files(files);
        if (metrics_path)
            smtrack::write_metrics_json(metrics_path, summary);
        if (out)
            *out = make_result({}, std::move(summary));
    });
}

size_t smt_result_summary_count(const smt_result *result) { return result ? result->summary.size() : 0; }

smt_status smt_result_summary(const smt_result *result, size_t index, smt_summary *out)
{
    return guarded([&] {
        require(result && out, "result and out must be non-NULL");
        require(index < result->summary.size(), "summary index out of range");
        const auto &s = result->summary[index];
        *out = {s.tracker.c_str(), s.median, s.p90, s.p95, s.n_samples};
    });
}

size_t smt_result_run_count(const smt_result *result) { return result ? result->runs.size() : 0; }

smt_status smt_result_run_info(const smt_result *result, size_t index, smt_run_info *out)
{
    return guarded([&] {
        require(result && out, "result and out must be non-NULL");
        require(index < result->runs.size(), "run index out of range");
        const auto &r = result->runs[index];
        *out = {result->run_names[index].c_str(), r.run, r.records.size(), r.stream_checksum};
    });
}

smt_status smt_result_record(const smt_result *result, size_t run_index, size_t record_index, smt_record *out)
{
    return guarded([&] {
        require(result && out, "result and out must be non-NULL");
        require(run_index < result->runs.size(), "run index out of range");
        const auto &records = result->runs[run_index].records;
        require(record_index < records.size(), "record index out of range");
        const auto &r = records[record_index];
        *out = {r.t, r.truth.x, r.truth.y, r.estimate.x, r.estimate.y, r.error};
    });
}

smt_status smt_result_write_metrics(const smt_result *result, const char *path)
{
    return guarded([&] {
        require(result && path, "result and path must be non-NULL");
        smtrack::write_metrics_json(path, result->summary);
    });
}

smt_status smt_result_metrics_json(const smt_result *result, char **out)
{
    return guarded([&] {
        require(result && out, "result and out must be non-NULL");
        *out = copy_string(smtrack::metrics_json(result->summary));
    });
}

void smt_result_free(smt_result *result) { delete result; }

smt_status smt_tracker_create(const smt_scenario *scenario, int use_smc, uint64_t seed, smt_tracker **out)
{
    return guarded([&] {
        require(scenario && out, "scenario and out must be non-NULL");
        smtrack::TrackerConfig tc = scenario->cfg.tracker;
        tc.likelihood.use_smc = use_smc != 0;
        tc.rng_seed = seed;
        auto t = std::make_unique<smt_tracker>();
        t->impl = std::make_unique<smtrack::SoftMultipathTracker>(scenario->cfg.floor_plan, tc);
        *out = t.release();
    });
}

smt_status smt_tracker_initialize(smt_tracker *tracker, double x, double y)
{
    return guarded([&] {
        require(tracker != nullptr, "tracker is NULL");
        tracker->impl->initialize({x, y});
    });
}

smt_status smt_tracker_update(smt_tracker *tracker, const smt_cir *profiles, size_t num_profiles, double *x_out,
                              double *y_out)
{
    return guarded([&] {
        require(tracker != nullptr, "tracker is NULL");
        const auto p = to_profiles(profiles, num_profiles);
        put_position(tracker->impl->update(p), x_out, y_out);
    });
}

smt_status smt_tracker_step(smt_tracker *tracker, const smt_cir *profiles, size_t num_profiles, double dt,
                            double *x_out, double *y_out)
{
    return guarded([&] {
        require(tracker != nullptr, "tracker is NULL");
        const auto p = to_profiles(profiles, num_profiles);
        put_position(tracker->impl->step(p, dt), x_out, y_out);
    });
}

smt_status smt_tracker_particles(const smt_tracker *tracker, size_t *count_out)
{
    return guarded([&] {
        require(tracker && count_out, "tracker and count_out must be non-NULL");
        *count_out = tracker->impl->particles().size();
    });
}

void smt_tracker_free(smt_tracker *tracker) { delete tracker; }

smt_status smt_mirror_point(double ax, double ay, double r1x, double r1y, double r2x, double r2y, double *x_out,
                            double *y_out)
{
    return guarded([&] {
        require(x_out && y_out, "outputs must be non-NULL");
        const smtrack::Reflector r{0, {r1x, r1y}, {r2x, r2y}};
        const auto p = smtrack::mirror_anchor({ax, ay}, r);
        *x_out = p.x;
        *y_out = p.y;
    });
}

smt_status smt_percentile(const double *values, size_t n, double q, double *out)
{
    return guarded([&] {
        require(out != nullptr && (values != nullptr || n == 0), "values and out must be non-NULL");
        *out = smtrack::percentile(std::span<const double>(values, n), q);
    });
}

} // extern "C"
