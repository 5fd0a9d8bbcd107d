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

#include "smtrack/scenario.hpp"
#include "smtrack/cir_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace smtrack
{
using nlohmann::json;

namespace
{
// Reads a JSON object and rejects keys nobody asked for, so typos in a
// scenario file surface as errors instead of silently using defaults.
class ObjectReader
{
  public:
    ObjectReader(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(path_ + ": expected an object");
    }

    void finish() const
    {
        for (const auto &item : j_.items())
            if (!seen_.count(item.key()))
                throw ConfigError(path_ + "." + item.key() + ": unknown key");
    }

    bool has(const std::string &key) const { return j_.contains(key); }

    const json &at(const std::string &key)
    {
        seen_.insert(key);
        if (!j_.contains(key))
            throw ConfigError(path_ + "." + key + ": required key missing");
        return j_.at(key);
    }

    template <typename T> void read(const std::string &key, T &out)
    {
        if (!j_.contains(key))
            return;
        seen_.insert(key);
        try
        {
            out = j_.at(key).get<T>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    std::string child(const std::string &key) const { return path_ + "." + key; }

  private:
    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

Point2D read_point(const json &j, const std::string &path)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(path + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json write_point(const Point2D &p) { return json::array({p.x, p.y}); }

FloorPlan read_floor_plan(const json &j, const std::string &path)
{
    FloorPlan plan;
    ObjectReader r(j, path);

    const json &anchors = r.at("anchors");
    if (!anchors.is_array())
        throw ConfigError(r.child("anchors") + ": expected an array");
    for (std::size_t i = 0; i < anchors.size(); ++i)
    {
        const std::string p = r.child("anchors") + "[" + std::to_string(i) + "]";
        ObjectReader a(anchors[i], p);
        Anchor anchor;
        a.read("id", anchor.id);
        anchor.position = read_point(a.at("position"), p + ".position");
        a.finish();
        plan.anchors.push_back(anchor);
    }

    if (r.has("reflectors"))
    {
        const json &refl = r.at("reflectors");
        if (!refl.is_array())
            throw ConfigError(r.child("reflectors") + ": expected an array");
        for (std::size_t i = 0; i < refl.size(); ++i)
        {
            const std::string p = r.child("reflectors") + "[" + std::to_string(i) + "]";
            ObjectReader a(refl[i], p);
            Reflector reflector;
            a.read("id", reflector.id);
            reflector.endpoint_a = read_point(a.at("endpoint_a"), p + ".endpoint_a");
            reflector.endpoint_b = read_point(a.at("endpoint_b"), p + ".endpoint_b");
            a.finish();
            plan.reflectors.push_back(reflector);
        }
    }

    if (r.has("obstacles"))
    {
        const json &obs = r.at("obstacles");
        if (!obs.is_array())
            throw ConfigError(r.child("obstacles") + ": expected an array");
        for (std::size_t i = 0; i < obs.size(); ++i)
        {
            const std::string p = r.child("obstacles") + "[" + std::to_string(i) + "]";
            ObjectReader a(obs[i], p);
            Obstacle obstacle;
            a.read("id", obstacle.id);
            const json &poly = a.at("polygon");
            if (!poly.is_array())
                throw ConfigError(p + ".polygon: expected an array of [x, y]");
            for (std::size_t k = 0; k < poly.size(); ++k)
                obstacle.polygon.push_back(read_point(poly[k], p + ".polygon[" + std::to_string(k) + "]"));
            a.finish();
            plan.obstacles.push_back(std::move(obstacle));
        }
    }
    r.finish();
    return plan;
}

ScenarioConfig from_json(const json &root)
{
    ScenarioConfig cfg;
    ObjectReader r(root, "scenario");

    r.read("rng_seed", cfg.rng_seed);
    r.read("num_monte_carlo_runs", cfg.num_monte_carlo_runs);
    if (r.has("trackers_to_run"))
    {
        const json &list = r.at("trackers_to_run");
        if (!list.is_array())
            throw ConfigError("scenario.trackers_to_run: expected an array of names");
        cfg.trackers_to_run.clear();
        for (const auto &name : list)
        {
            if (!name.is_string())
                throw ConfigError("scenario.trackers_to_run: expected strings");
            cfg.trackers_to_run.push_back(tracker_kind_from_string(name.get<std::string>()));
        }
    }

    cfg.floor_plan = read_floor_plan(r.at("floor_plan"), r.child("floor_plan"));

    {
        ObjectReader t(r.at("trajectory"), r.child("trajectory"));
        const json &wps = t.at("waypoints");
        if (!wps.is_array())
            throw ConfigError("scenario.trajectory.waypoints: expected an array of [x, y]");
        for (std::size_t i = 0; i < wps.size(); ++i)
            cfg.trajectory.waypoints.push_back(
                read_point(wps[i], "scenario.trajectory.waypoints[" + std::to_string(i) + "]"));
        t.read("speed_mps", cfg.trajectory.speed);
        t.read("sample_interval_s", cfg.trajectory.sample_interval);
        t.finish();
    }

    if (r.has("channel"))
    {
        ObjectReader c(r.at("channel"), r.child("channel"));
        auto &ch = cfg.channel;
        c.read("bandwidth_hz", ch.bandwidth);
        c.read("tap_spacing_s", ch.tap_spacing);
        c.read("num_taps", ch.num_taps);
        c.read("reference_gain_at_1m", ch.reference_gain_at_1m);
        c.read("path_loss_exponent", ch.path_loss_exponent);
        c.read("reflection_loss", ch.reflection_loss);
        c.read("dmc_onset_power", ch.dmc_onset_power);
        c.read("dmc_decay_constant_s", ch.dmc_decay_constant);
        c.read("noise_floor_power", ch.noise_floor_power);
        c.read("check_reflected_blockage", ch.check_reflected_blockage);
        c.finish();
    }

    if (r.has("tracker"))
    {
        ObjectReader t(r.at("tracker"), r.child("tracker"));
        auto &tr = cfg.tracker;
        t.read("num_particles", tr.num_particles);
        t.read("velocity_noise_std_mps", tr.velocity_noise_std);
        t.read("init_position_std_m", tr.init_position_std);
        t.read("init_velocity_std_mps", tr.init_velocity_std);
        t.read("resample_threshold_ess_fraction", tr.resample_threshold_ess_fraction);
        if (t.has("likelihood"))
        {
            ObjectReader l(t.at("likelihood"), t.child("likelihood"));
            l.read("neighborhood_radius_s", tr.likelihood.neighborhood_radius);
            l.read("floor_probability", tr.likelihood.floor_probability);
            l.finish();
        }
        t.finish();
    }

    if (r.has("baseline"))
    {
        ObjectReader b(r.at("baseline"), r.child("baseline"));
        b.read("num_particles", cfg.baseline_num_particles);
        b.read("range_std_m", cfg.baseline_range_std);
        b.finish();
    }

    if (r.has("lde"))
    {
        ObjectReader l(r.at("lde"), r.child("lde"));
        l.read("noise_window_taps", cfg.lde.noise_window_taps);
        l.read("threshold_noise_multiplier", cfg.lde.threshold_noise_multiplier);
        l.read("threshold_peak_fraction", cfg.lde.threshold_peak_fraction);
        l.read("backtrack_fraction", cfg.lde.backtrack_fraction);
        l.finish();
    }
    r.finish();
    cfg.lde.bandwidth = cfg.channel.bandwidth;
    return cfg;
}
} // namespace

std::string_view to_string(TrackerKind kind)
{
    switch (kind)
    {
    case TrackerKind::Baseline:
        return "baseline";
    case TrackerKind::ProposedLosOnly:
        return "proposed_los_only";
    case TrackerKind::ProposedSmc:
        return "proposed_smc";
    }
    return "unknown";
}

TrackerKind tracker_kind_from_string(std::string_view name)
{
    for (auto k : {TrackerKind::Baseline, TrackerKind::ProposedLosOnly, TrackerKind::ProposedSmc})
        if (to_string(k) == name)
            return k;
    throw ConfigError("unknown tracker '" + std::string(name) +
                      "' (expected baseline, proposed_los_only or proposed_smc)");
}

std::vector<TrackerKind> parse_tracker_list(std::string_view list)
{
    std::vector<TrackerKind> out;
    std::size_t start = 0;
    while (start <= list.size())
    {
        std::size_t end = list.find(',', start);
        if (end == std::string_view::npos)
            end = list.size();
        std::string_view item = list.substr(start, end - start);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty())
            out.push_back(tracker_kind_from_string(item));
        start = end + 1;
    }
    if (out.empty())
        throw ConfigError("empty tracker list");
    return out;
}

void ScenarioConfig::validate() const
{
    try
    {
        floor_plan.validate();
        channel.validate();
        tracker.validate();
        lde.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }

    if (floor_plan.anchors.empty())
        throw ConfigError("floor_plan.anchors: at least one anchor is required");
    if (trajectory.waypoints.size() < 2)
        throw ConfigError("trajectory.waypoints: at least 2 waypoints are required");
    for (const auto &w : trajectory.waypoints)
        if (!is_finite(w))
            throw ConfigError("trajectory.waypoints: non-finite coordinate");
    if (!(trajectory.speed > 0.0))
        throw ConfigError("trajectory.speed_mps must be > 0");
    if (!(trajectory.sample_interval > 0.0))
        throw ConfigError("trajectory.sample_interval_s must be > 0");
    if (trackers_to_run.empty())
        throw ConfigError("trackers_to_run: select at least one tracker");
    if (std::set<TrackerKind>(trackers_to_run.begin(), trackers_to_run.end()).size() != trackers_to_run.size())
        throw ConfigError("trackers_to_run: duplicate tracker");
    if (num_monte_carlo_runs < 1)
        throw ConfigError("num_monte_carlo_runs must be >= 1");
    if (baseline_num_particles < 2)
        throw ConfigError("baseline.num_particles must be >= 2");
    if (!(baseline_range_std > 0.0))
        throw ConfigError("baseline.range_std_m must be > 0");
    if (lde.bandwidth != channel.bandwidth)
        throw ConfigError("lde bandwidth must match channel.bandwidth_hz");

    // Distance to a fixed point is convex along each segment, so checking
    // the waypoints bounds every delay along the trajectory.
    const double max_delay = channel.window() - pulse_half_support(channel.bandwidth);
    for (const auto &w : trajectory.waypoints)
    {
        for (const auto &a : floor_plan.anchors)
            if (path_delay(w, a.position) >= max_delay)
                throw ConfigError("anchor " + std::to_string(a.id) +
                                  " is beyond the CIR window from some waypoint; increase channel.num_taps");
        for (const auto &va : floor_plan.virtual_anchors())
            if (path_delay(w, va.position) >= max_delay)
                throw ConfigError("virtual anchor (" + std::to_string(va.physical_anchor_id) + "," +
                                  std::to_string(va.reflector_id) +
                                  ") is beyond the CIR window; increase channel.num_taps");
    }
}

ScenarioConfig parse_scenario(std::string_view json_text)
{
    json root;
    try
    {
        root = json::parse(json_text.begin(), json_text.end());
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    ScenarioConfig cfg = from_json(root);
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    try
    {
        return parse_scenario(ss.str());
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string scenario_to_json(const ScenarioConfig &cfg)
{
    json root;
    root["rng_seed"] = cfg.rng_seed;
    root["num_monte_carlo_runs"] = cfg.num_monte_carlo_runs;
    root["trackers_to_run"] = json::array();
    for (auto k : cfg.trackers_to_run)
        root["trackers_to_run"].push_back(std::string(to_string(k)));

    json plan;
    plan["anchors"] = json::array();
    for (const auto &a : cfg.floor_plan.anchors)
        plan["anchors"].push_back({{"id", a.id}, {"position", write_point(a.position)}});
    plan["reflectors"] = json::array();
    for (const auto &r : cfg.floor_plan.reflectors)
        plan["reflectors"].push_back(
            {{"id", r.id}, {"endpoint_a", write_point(r.endpoint_a)}, {"endpoint_b", write_point(r.endpoint_b)}});
    plan["obstacles"] = json::array();
    for (const auto &o : cfg.floor_plan.obstacles)
    {
        json poly = json::array();
        for (const auto &v : o.polygon)
            poly.push_back(write_point(v));
        plan["obstacles"].push_back({{"id", o.id}, {"polygon", poly}});
    }
    root["floor_plan"] = plan;

    json wps = json::array();
    for (const auto &w : cfg.trajectory.waypoints)
        wps.push_back(write_point(w));
    root["trajectory"] = {{"waypoints", wps},
                          {"speed_mps", cfg.trajectory.speed},
                          {"sample_interval_s", cfg.trajectory.sample_interval}};

    const auto &ch = cfg.channel;
    root["channel"] = {{"bandwidth_hz", ch.bandwidth},
                       {"tap_spacing_s", ch.tap_spacing},
                       {"num_taps", ch.num_taps},
                       {"reference_gain_at_1m", ch.reference_gain_at_1m},
                       {"path_loss_exponent", ch.path_loss_exponent},
                       {"reflection_loss", ch.reflection_loss},
                       {"dmc_onset_power", ch.dmc_onset_power},
                       {"dmc_decay_constant_s", ch.dmc_decay_constant},
                       {"noise_floor_power", ch.noise_floor_power},
                       {"check_reflected_blockage", ch.check_reflected_blockage}};

    const auto &tr = cfg.tracker;
    root["tracker"] = {{"num_particles", tr.num_particles},
                       {"velocity_noise_std_mps", tr.velocity_noise_std},
                       {"init_position_std_m", tr.init_position_std},
                       {"init_velocity_std_mps", tr.init_velocity_std},
                       {"resample_threshold_ess_fraction", tr.resample_threshold_ess_fraction},
                       {"likelihood",
                        {{"neighborhood_radius_s", tr.likelihood.neighborhood_radius},
                         {"floor_probability", tr.likelihood.floor_probability}}}};
    root["baseline"] = {{"num_particles", cfg.baseline_num_particles}, {"range_std_m", cfg.baseline_range_std}};
    root["lde"] = {{"noise_window_taps", cfg.lde.noise_window_taps},
                   {"threshold_noise_multiplier", cfg.lde.threshold_noise_multiplier},
                   {"threshold_peak_fraction", cfg.lde.threshold_peak_fraction},
                   {"backtrack_fraction", cfg.lde.backtrack_fraction}};
    return root.dump(2) + "\n";
}

ScenarioConfig default_scenario(int num_anchors)
{
    if (num_anchors != 3 && num_anchors != 4)
        throw ConfigError("default scenario is defined for 3 or 4 anchors");

    ScenarioConfig cfg;
    cfg.rng_seed = 20240601;
    cfg.num_monte_carlo_runs = 20;

    auto &plan = cfg.floor_plan;
    plan.anchors = {{1, {1.0, 1.0}}, {2, {19.0, 1.5}}, {3, {10.0, 14.8}}};
    if (num_anchors == 4)
        plan.anchors.push_back({4, {1.0, 14.5}});

    plan.reflectors = {
        {1, {0.0, 0.0}, {0.0, 15.0}},  // concrete wall
        {2, {20.0, 2.0}, {20.0, 13.0}} // metal plate
    };

    auto box = [](int id, double x0, double y0, double x1, double y1) {
        return Obstacle{id, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
    };
    plan.obstacles = {
        box(1, 6.8, 1.1, 7.3, 2.9),    // rack shadowing anchor 1 at the end of the south aisle
        box(2, 16.8, 5.3, 18.0, 5.7),  // shelf shadowing anchor 2 on the east aisle
        box(3, 7.85, 12.35, 8.2, 13.2) // pillar shadowing anchor 3 on the north aisle
    };

    cfg.trajectory.waypoints = {{5.0, 5.0}, {15.0, 5.0}, {15.0, 10.0}, {5.0, 10.0}, {5.0, 5.0}};
    cfg.trajectory.speed = 1.0;
    cfg.trajectory.sample_interval = 0.1;

    // the pulse's first sidelobe sits near 0.11 of the peak
    cfg.lde.noise_window_taps = 8;
    cfg.lde.threshold_peak_fraction = 0.2;

    cfg.lde.bandwidth = cfg.channel.bandwidth;
    return cfg;
}

} // namespace smtrack
