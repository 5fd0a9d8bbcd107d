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

// smtrack command line: simulate, track, eval, run.

#include "smtrack/smtrack.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace
{
struct Failure : std::runtime_error
{
    Failure(smt_status s, const std::string &what) : std::runtime_error(what), status(s) {}
    smt_status status;
};

void check(smt_status s)
{
    if (s != SMT_OK)
        throw Failure(s, smt_last_error());
}

struct ScenarioDeleter
{
    void operator()(smt_scenario *s) const { smt_scenario_free(s); }
};
struct ResultDeleter
{
    void operator()(smt_result *r) const { smt_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<smt_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<smt_result, ResultDeleter>;

struct CommonOptions
{
    std::string config;
    int anchors = 3;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::string trackers;
};

void add_scenario_options(CLI::App *cmd, CommonOptions &o, bool with_trackers)
{
    cmd->add_option("--config", o.config, "Scenario JSON file (default: built-in warehouse)")->check(CLI::ExistingFile);
    cmd->add_option("--anchors", o.anchors, "Anchor count of the built-in scenario")->check(CLI::IsMember({3, 4}));
    cmd->add_option("--seed", o.seed, "RNG seed, overrides the config");
    cmd->add_option("--runs", o.runs, "Monte Carlo runs, overrides the config")->check(CLI::PositiveNumber);
    if (with_trackers)
        cmd->add_option("--trackers", o.trackers, "Comma list of baseline,proposed_los_only,proposed_smc");
}

ScenarioPtr load(const CommonOptions &o)
{
    smt_scenario *raw = nullptr;
    if (o.config.empty())
        check(smt_scenario_default(o.anchors, &raw));
    else
        check(smt_scenario_load(o.config.c_str(), &raw));
    ScenarioPtr s(raw);
    if (o.seed)
        check(smt_scenario_set_seed(s.get(), *o.seed));
    if (o.runs)
        check(smt_scenario_set_runs(s.get(), *o.runs));
    if (!o.trackers.empty())
        check(smt_scenario_set_trackers(s.get(), o.trackers.c_str()));
    return s;
}

void print_summary(const smt_result *r)
{
    std::printf("%-20s %10s %10s %10s %10s\n", "tracker", "median_m", "p90_m", "p95_m", "samples");
    for (size_t i = 0; i < smt_result_summary_count(r); ++i)
    {
        smt_summary s;
        check(smt_result_summary(r, i, &s));
        std::printf("%-20s %10.4f %10.4f %10.4f %10zu\n", s.tracker, s.median_m, s.p90_m, s.p95_m, s.n_samples);
    }
}

std::string take_string(char *s)
{
    std::string out(s);
    smt_string_free(s);
    return out;
}
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Soft multipath information UWB tracking simulator and benchmark"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(smt_version()));

    CommonOptions sim_o, track_o, run_o, def_o;
    std::string sim_out, track_out, run_out, eval_in, eval_out, cir_path, truth_path;
    bool dump_cir = false;

    auto *sim = app.add_subcommand("simulate", "Write synthetic CIR records and ground truth");
    add_scenario_options(sim, sim_o, false);
    sim->add_option("--out", sim_out, "Output directory")->required();

    auto *track = app.add_subcommand("track", "Track simulated or recorded CIRs and write trajectory CSVs");
    add_scenario_options(track, track_o, true);
    track->add_option("--out", track_out, "Output directory")->required();
    auto *cir_opt = track->add_option("--cir", cir_path, "CIR record file to replay")->check(CLI::ExistingFile);
    track->add_option("--truth", truth_path, "Ground-truth CSV for the replayed records")
        ->check(CLI::ExistingFile)
        ->needs(cir_opt);

    auto *eval = app.add_subcommand("eval", "Summarize trajectory CSVs into metrics JSON");
    eval->add_option("--in", eval_in, "Trajectory CSV or directory of traj_*.csv")->required();
    eval->add_option("--out", eval_out, "Metrics JSON path (default: stdout)");

    auto *run = app.add_subcommand("run", "Simulate, track and evaluate end to end");
    add_scenario_options(run, run_o, true);
    run->add_option("--out", run_out, "Output directory")->required();
    run->add_flag("--dump-cir", dump_cir, "Also write the CIR records and ground truth");

    auto *defcfg = app.add_subcommand("default-config", "Print the built-in scenario as JSON");
    defcfg->add_option("--anchors", def_o.anchors, "Anchor count")->check(CLI::IsMember({3, 4}));

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sim)
        {
            auto s = load(sim_o);
            check(smt_simulate(s.get(), sim_out.c_str()));
        }
        else if (*track)
        {
            auto s = load(track_o);
            smt_result *raw = nullptr;
            check(smt_track(s.get(), track_out.c_str(), cir_path.empty() ? nullptr : cir_path.c_str(),
                            truth_path.empty() ? nullptr : truth_path.c_str(), &raw));
            ResultPtr r(raw);
            if (smt_result_summary_count(r.get()) > 0)
                print_summary(r.get());
        }
        else if (*eval)
        {
            smt_result *raw = nullptr;
            check(smt_evaluate(eval_in.c_str(), eval_out.empty() ? nullptr : eval_out.c_str(), &raw));
            ResultPtr r(raw);
            if (eval_out.empty())
            {
                char *text = nullptr;
                check(smt_result_metrics_json(r.get(), &text));
                std::fputs(take_string(text).c_str(), stdout);
            }
            else
                print_summary(r.get());
        }
        else if (*run)
        {
            auto s = load(run_o);
            smt_result *raw = nullptr;
            check(smt_run(s.get(), run_out.c_str(), dump_cir ? 1 : 0, &raw));
            ResultPtr r(raw);
            print_summary(r.get());
        }
        else if (*defcfg)
        {
            auto s = load(def_o);
            char *text = nullptr;
            check(smt_scenario_to_json(s.get(), &text));
            std::fputs(take_string(text).c_str(), stdout);
        }
    }
    catch (const Failure &f)
    {
        std::fprintf(stderr, "smtrack: error: %s: %s\n", smt_status_string(f.status), f.what());
        return 1;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "smtrack: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
