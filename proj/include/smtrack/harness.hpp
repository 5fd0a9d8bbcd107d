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

#ifndef SMTRACK_HARNESS_HPP
#define SMTRACK_HARNESS_HPP

// End-to-end simulation runs and their file outputs.
//
// Output directory layout:
//   cir_runNNN.txt                 CIR records (simulate, or run --dump-cir)
//   truth_runNNN.csv               t,x,y ground truth (simulate)
//   traj_<tracker>_runNNN.csv      t,x_true,y_true,x_est,y_est,error_m
//   metrics.json                   {"<tracker>": {median_m, p90_m, p95_m, n_samples}}

#include "smtrack/channel.hpp"
#include "smtrack/scenario.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smtrack
{
struct TimedPoint
{
    double t = 0.0;
    Point2D position;
};

/// Constant-speed walk along the waypoints, sampled every sample_interval
/// starting at the first waypoint. The final sample is the last one that
/// does not overshoot the path end.
std::vector<TimedPoint> generate_trajectory(const TrajectoryConfig &cfg);

/// Nearest-rank percentile: the ceil(q/100 * n)-th order statistic.
/// Throws std::invalid_argument for an empty list or q outside (0, 100].
double percentile(std::span<const double> errors, double q);

// One epoch holds one profile per anchor, all with the same timestamp.
using Epoch = std::vector<CirProfile>;

struct SimulatedRun
{
    std::vector<TimedPoint> truth;
    std::vector<Epoch> epochs;
};

/// Synthesizes every profile of Monte Carlo run `run`. Channel randomness for
/// (run, anchor, epoch) comes from its own substream of the scenario seed.
SimulatedRun simulate_run(const ScenarioConfig &cfg, int run);

struct TrackRecord
{
    double t = 0.0;
    Point2D truth;     // NaN when no ground truth is known
    Point2D estimate;
    double error = 0.0; // m, NaN when no ground truth is known
};

struct TrackerRun
{
    TrackerKind kind = TrackerKind::Baseline;
    int run = 0;
    std::vector<TrackRecord> records;
    std::uint64_t stream_checksum = 0; // FNV-1a over the profiles consumed
};

struct ErrorSummary
{
    std::string tracker;
    double median = 0.0; // m
    double p90 = 0.0;    // m
    double p95 = 0.0;    // m
    std::size_t n_samples = 0;
};

struct TrackResult
{
    std::vector<TrackerRun> runs;
    std::vector<ErrorSummary> summary;

    const ErrorSummary *find(TrackerKind kind) const;
};

/// Checksum of a profile sequence, as recorded in TrackerRun::stream_checksum.
std::uint64_t profile_checksum(std::span<const Epoch> epochs);

/// First fix for all trackers: LDE ranges of the first epoch, trilaterated.
/// Falls back to the anchor centroid when fewer than three ranges are usable.
Point2D first_fix(const ScenarioConfig &cfg, const Epoch &first_epoch);

/// Runs one tracker over the given epochs. `truth` may be empty (replay
/// without ground truth) or hold one entry per epoch.
TrackerRun track_run(const ScenarioConfig &cfg, TrackerKind kind, int run, std::span<const Epoch> epochs,
                     std::span<const TimedPoint> truth);

std::vector<ErrorSummary> summarize(std::span<const TrackerRun> runs, std::span<const TrackerKind> order);

/// All Monte Carlo runs, every selected tracker fed the identical profiles.
TrackResult run_scenario(const ScenarioConfig &cfg);

// ---- files ---------------------------------------------------------------

std::string run_tag(int run); // "run007"
std::string trajectory_file_name(TrackerKind kind, int run);

void write_trajectory_csv(const std::string &path, const TrackerRun &run);
void write_truth_csv(const std::string &path, std::span<const TimedPoint> truth);
std::vector<TimedPoint> read_truth_csv(const std::string &path);
std::string metrics_json(std::span<const ErrorSummary> summary);
void write_metrics_json(const std::string &path, std::span<const ErrorSummary> summary);

/// Groups records into epochs by timestamp, in file order.
std::vector<Epoch> group_epochs(std::vector<CirProfile> profiles);

/// Reads trajectory CSVs and aggregates errors per tracker. The tracker name
/// comes from a `traj_<tracker>_runNNN.csv` file name, else the file stem.
std::vector<ErrorSummary> evaluate_trajectory_files(std::span<const std::string> paths);

/// Lists traj_*.csv files in a directory, sorted by name.
std::vector<std::string> find_trajectory_files(const std::string &dir);

void simulate_to_directory(const ScenarioConfig &cfg, const std::string &out_dir);

/// Tracks every run (synthesizing profiles), or replays one CIR record file
/// when `cir_path` is given; `truth_path` optionally supplies ground truth.
std::vector<TrackerRun> track_to_directory(const ScenarioConfig &cfg, const std::string &out_dir,
                                           const std::optional<std::string> &cir_path,
                                           const std::optional<std::string> &truth_path);

TrackResult run_to_directory(const ScenarioConfig &cfg, const std::string &out_dir, bool dump_cir);

} // namespace smtrack

#endif
