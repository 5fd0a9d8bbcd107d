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

#ifndef SMTRACK_SCENARIO_HPP
#define SMTRACK_SCENARIO_HPP

#include "smtrack/baseline.hpp"
#include "smtrack/channel.hpp"
#include "smtrack/geometry.hpp"
#include "smtrack/tracker.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smtrack
{
struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

enum class TrackerKind
{
    Baseline,
    ProposedLosOnly,
    ProposedSmc
};

std::string_view to_string(TrackerKind kind);
/// Throws ConfigError for an unknown name.
TrackerKind tracker_kind_from_string(std::string_view name);
/// Comma-separated list, e.g. "baseline,proposed_smc".
std::vector<TrackerKind> parse_tracker_list(std::string_view list);

struct TrajectoryConfig
{
    std::vector<Point2D> waypoints;
    double speed = 1.0;           // m/s
    double sample_interval = 0.1; // s
};

struct ScenarioConfig
{
    FloorPlan floor_plan;
    TrajectoryConfig trajectory;
    ChannelConfig channel;
    TrackerConfig tracker; // proposed tracker; the baseline shares its motion settings
    std::size_t baseline_num_particles = 1000;
    double baseline_range_std = 0.3; // m
    LdeConfig lde;
    std::vector<TrackerKind> trackers_to_run{TrackerKind::Baseline, TrackerKind::ProposedLosOnly,
                                             TrackerKind::ProposedSmc};
    int num_monte_carlo_runs = 1;
    std::uint64_t rng_seed = 1;

    /// Throws ConfigError with a diagnostic on any inconsistency.
    void validate() const;
};

ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::string &path);
std::string scenario_to_json(const ScenarioConfig &cfg);

/// Desk-scale cluttered warehouse: 20 m x 15 m hall, one wall and one metal
/// reflector, three shelves that block line of sight on parts of a looping
/// walk. `num_anchors` is 3 or 4; the fourth anchor is added on top of the
/// same three.
ScenarioConfig default_scenario(int num_anchors = 3);

} // namespace smtrack

#endif
