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

#include "smtrack/harness.hpp"
#include "smtrack/baseline.hpp"
#include "smtrack/cir_io.hpp"
#include "smtrack/tracker.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace smtrack
{
namespace fs = std::filesystem;

namespace
{
constexpr std::uint64_t kChannelDomain = 1;
constexpr std::uint64_t kTrackerDomain = 2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Fnv1a
{
  public:
    void add(const void *data, std::size_t n)
    {
        const auto *p = static_cast<const unsigned char *>(data);
        for (std::size_t i = 0; i < n; ++i)
        {
            h_ ^= p[i];
            h_ *= 0x100000001b3ULL;
        }
    }
    template <typename T> void add(const T &v) { add(&v, sizeof(T)); }
    void add(const CirProfile &p)
    {
        add(p.anchor_id);
        add(p.timestamp);
        add(p.tap_spacing);
        add(p.taps.data(), p.taps.size() * sizeof(double));
    }
    std::uint64_t value() const { return h_; }

  private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

void ensure_directory(const std::string &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::string &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    return os;
}

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t end = line.find(',', start);
        out.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
        out.back().remove_suffix(1);
    return out;
}

std::uint64_t tracker_seed(const ScenarioConfig &cfg, TrackerKind kind, int run)
{
    Rng g = substream(cfg.rng_seed, {kTrackerDomain, static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(kind)});
    return g();
}
} // namespace

std::vector<TimedPoint> generate_trajectory(const TrajectoryConfig &cfg)
{
    const auto &w = cfg.waypoints;
    if (w.size() < 2 || !(cfg.speed > 0.0) || !(cfg.sample_interval > 0.0))
        throw std::invalid_argument("generate_trajectory: need >= 2 waypoints, speed > 0 and interval > 0");

    std::vector<double> cum(w.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i)
        cum[i] = cum[i - 1] + distance(w[i - 1], w[i]);
    const double total = cum.back();
    const double step = cfg.speed * cfg.sample_interval;
    const auto n = static_cast<std::size_t>(std::floor(total / step + 1e-9)) + 1;

    std::vector<TimedPoint> out;
    out.reserve(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double s = std::min(static_cast<double>(i) * step, total);
        while (seg + 2 < w.size() && s > cum[seg + 1])
            ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double frac = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
        out.push_back({static_cast<double>(i) * cfg.sample_interval, w[seg] + (w[seg + 1] - w[seg]) * frac});
    }
    return out;
}

double percentile(std::span<const double> errors, double q)
{
    if (errors.empty())
        throw std::invalid_argument("percentile: empty error list");
    if (!(q > 0.0 && q <= 100.0))
        throw std::invalid_argument("percentile: q must be in (0, 100]");
    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n / 100.0));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

SimulatedRun simulate_run(const ScenarioConfig &cfg, int run)
{
    SimulatedRun out;
    out.truth = generate_trajectory(cfg.trajectory);
    out.epochs.reserve(out.truth.size());
    for (std::size_t k = 0; k < out.truth.size(); ++k)
    {
        Epoch epoch;
        epoch.reserve(cfg.floor_plan.anchors.size());
        for (const auto &anchor : cfg.floor_plan.anchors)
        {
            Rng rng = substream(cfg.rng_seed, {kChannelDomain, static_cast<std::uint64_t>(run),
                                               static_cast<std::uint64_t>(anchor.id), static_cast<std::uint64_t>(k)});
            const auto paths = enumerate_paths(out.truth[k].position, anchor, cfg.floor_plan, cfg.channel);
            epoch.push_back(synthesize_cir(paths, cfg.channel, rng, anchor.id, out.truth[k].t));
        }
        out.epochs.push_back(std::move(epoch));
    }
    return out;
}

const ErrorSummary *TrackResult::find(TrackerKind kind) const
{
    auto it = std::find_if(summary.begin(), summary.end(), [&](const ErrorSummary &s) { return s.tracker == to_string(kind); });
    return it == summary.end() ? nullptr : &*it;
}

std::uint64_t profile_checksum(std::span<const Epoch> epochs)
{
    Fnv1a h;
    for (const auto &e : epochs)
        for (const auto &p : e)
            h.add(p);
    return h.value();
}

Point2D first_fix(const ScenarioConfig &cfg, const Epoch &first_epoch)
{
    std::vector<RangeMeasurement> ranges;
    for (const auto &p : first_epoch)
        ranges.push_back(lde_first_path(p, cfg.lde));
    try
    {
        return trilaterate(ranges, cfg.floor_plan.anchors);
    }
    catch (const std::invalid_argument &)
    {
        Point2D c{};
        for (const auto &a : cfg.floor_plan.anchors)
            c += a.position;
        return c * (1.0 / static_cast<double>(cfg.floor_plan.anchors.size()));
    }
}

TrackerRun track_run(const ScenarioConfig &cfg, TrackerKind kind, int run, std::span<const Epoch> epochs,
                     std::span<const TimedPoint> truth)
{
    if (epochs.empty())
        throw std::invalid_argument("track_run: no epochs");
    if (!truth.empty() && truth.size() != epochs.size())
        throw std::invalid_argument("track_run: ground truth and epochs differ in length");

    TrackerRun out;
    out.kind = kind;
    out.run = run;
    out.records.reserve(epochs.size());

    const Point2D fix = first_fix(cfg, epochs.front());
    const std::uint64_t seed = tracker_seed(cfg, kind, run);
    Fnv1a checksum;

    auto epoch_time = [&](std::size_t k) { return epochs[k].front().timestamp; };
    auto dt_at = [&](std::size_t k) {
        const double dt = epoch_time(k) - epoch_time(k - 1);
        if (!(dt > 0.0))
            throw std::invalid_argument("track_run: epoch timestamps must be strictly increasing");
        return dt;
    };
    auto record = [&](std::size_t k, const TagState &est) {
        TrackRecord r;
        r.t = epoch_time(k);
        r.estimate = est.position;
        if (truth.empty())
        {
            r.truth = {kNaN, kNaN};
            r.error = kNaN;
        }
        else
        {
            r.truth = truth[k].position;
            r.error = distance(r.truth, r.estimate);
        }
        out.records.push_back(r);
    };

    if (kind == TrackerKind::Baseline)
    {
        BaselineConfig bc;
        bc.tracker = cfg.tracker;
        bc.tracker.num_particles = cfg.baseline_num_particles;
        bc.tracker.rng_seed = seed;
        bc.range_std = cfg.baseline_range_std;
        RangeParticleFilter filter(cfg.floor_plan.anchors, bc);
        filter.initialize(fix);

        std::vector<RangeMeasurement> ranges;
        for (std::size_t k = 0; k < epochs.size(); ++k)
        {
            ranges.clear();
            for (const auto &p : epochs[k])
            {
                checksum.add(p);
                ranges.push_back(lde_first_path(p, cfg.lde));
            }
            record(k, k == 0 ? filter.update(ranges) : filter.step(ranges, dt_at(k)));
        }
    }
    else
    {
        TrackerConfig tc = cfg.tracker;
        tc.likelihood.use_smc = kind == TrackerKind::ProposedSmc;
        tc.rng_seed = seed;
        SoftMultipathTracker tracker(cfg.floor_plan, tc);
        tracker.initialize(fix);

        for (std::size_t k = 0; k < epochs.size(); ++k)
        {
            for (const auto &p : epochs[k])
                checksum.add(p);
            record(k, k == 0 ? tracker.update(epochs[k]) : tracker.step(epochs[k], dt_at(k)));
        }
    }
    out.stream_checksum = checksum.value();
    return out;
}

std::vector<ErrorSummary> summarize(std::span<const TrackerRun> runs, std::span<const TrackerKind> order)
{
    std::vector<ErrorSummary> out;
    for (auto kind : order)
    {
        std::vector<double> errors;
        for (const auto &r : runs)
            if (r.kind == kind)
                for (const auto &rec : r.records)
                    if (std::isfinite(rec.error))
                        errors.push_back(rec.error);
        if (errors.empty())
            continue;
        out.push_back({std::string(to_string(kind)), percentile(errors, 50.0), percentile(errors, 90.0),
                       percentile(errors, 95.0), errors.size()});
    }
    return out;
}

TrackResult run_scenario(const ScenarioConfig &cfg)
{
    cfg.validate();
    TrackResult result;
    for (int run = 0; run < cfg.num_monte_carlo_runs; ++run)
    {
        const SimulatedRun sim = simulate_run(cfg, run);
        for (auto kind : cfg.trackers_to_run)
            result.runs.push_back(track_run(cfg, kind, run, sim.epochs, sim.truth));
    }
    result.summary = summarize(result.runs, cfg.trackers_to_run);
    return result;
}

std::string run_tag(int run)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "run%03d", run);
    return buf;
}

std::string trajectory_file_name(TrackerKind kind, int run)
{
    return "traj_" + std::string(to_string(kind)) + "_" + run_tag(run) + ".csv";
}

void write_trajectory_csv(const std::string &path, const TrackerRun &run)
{
    auto os = open_out(path);
    os << "t,x_true,y_true,x_est,y_est,error_m\n";
    for (const auto &r : run.records)
        os << format_double(r.t) << ',' << format_double(r.truth.x) << ',' << format_double(r.truth.y) << ','
           << format_double(r.estimate.x) << ',' << format_double(r.estimate.y) << ',' << format_double(r.error)
           << '\n';
    if (!os)
        throw IoError("write to '" + path + "' failed");
}

void write_truth_csv(const std::string &path, std::span<const TimedPoint> truth)
{
    auto os = open_out(path);
    os << "t,x,y\n";
    for (const auto &p : truth)
        os << format_double(p.t) << ',' << format_double(p.position.x) << ',' << format_double(p.position.y) << '\n';
    if (!os)
        throw IoError("write to '" + path + "' failed");
}

std::vector<TimedPoint> read_truth_csv(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path + "'");
    std::vector<TimedPoint> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line))
    {
        ++line_no;
        if (line_no == 1 || line.empty())
            continue;
        const auto f = split_csv(line);
        if (f.size() != 3)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected t,x,y");
        out.push_back({parse_double(f[0]), {parse_double(f[1]), parse_double(f[2])}});
    }
    return out;
}

std::string metrics_json(std::span<const ErrorSummary> summary)
{
    nlohmann::json root = nlohmann::json::object();
    for (const auto &s : summary)
        root[s.tracker] = {{"median_m", s.median}, {"p90_m", s.p90}, {"p95_m", s.p95}, {"n_samples", s.n_samples}};
    return root.dump(2) + '\n';
}

void write_metrics_json(const std::string &path, std::span<const ErrorSummary> summary)
{
    auto os = open_out(path);
    os << metrics_json(summary);
    if (!os)
        throw IoError("write to '" + path + "' failed");
}

std::vector<Epoch> group_epochs(std::vector<CirProfile> profiles)
{
    std::vector<Epoch> out;
    std::map<double, std::size_t> index;
    for (auto &p : profiles)
    {
        auto [it, inserted] = index.try_emplace(p.timestamp, out.size());
        if (inserted)
            out.emplace_back();
        out[it->second].push_back(std::move(p));
    }
    return out;
}

std::vector<ErrorSummary> evaluate_trajectory_files(std::span<const std::string> paths)
{
    if (paths.empty())
        throw std::invalid_argument("eval: no trajectory files given");

    std::map<std::string, std::vector<double>> errors;
    for (const auto &path : paths)
    {
        std::string name = fs::path(path).stem().string();
        if (name.rfind("traj_", 0) == 0)
        {
            name = name.substr(5);
            const auto pos = name.rfind("_run");
            if (pos != std::string::npos)
                name = name.substr(0, pos);
        }

        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open '" + path + "'");
        auto &bucket = errors[name];
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(is, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            const auto f = split_csv(line);
            if (line_no == 1)
            {
                if (f.size() != 6 || f[5] != "error_m")
                    throw ParseError(path + ": expected header t,x_true,y_true,x_est,y_est,error_m");
                continue;
            }
            if (f.size() != 6)
                throw ParseError(path + ":" + std::to_string(line_no) + ": expected 6 columns");
            const double e = parse_double(f[5]);
            if (std::isfinite(e))
                bucket.push_back(e);
        }
    }

    std::vector<ErrorSummary> out;
    for (const auto &[name, e] : errors)
        if (!e.empty())
            out.push_back({name, percentile(e, 50.0), percentile(e, 90.0), percentile(e, 95.0), e.size()});
    return out;
}

std::vector<std::string> find_trajectory_files(const std::string &dir)
{
    std::error_code ec;
    std::vector<std::string> out;
    for (const auto &entry : fs::directory_iterator(dir, ec))
    {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("traj_", 0) == 0 && entry.path().extension() == ".csv")
            out.push_back(entry.path().string());
    }
    if (ec)
        throw IoError("cannot list '" + dir + "': " + ec.message());
    std::sort(out.begin(), out.end());
    return out;
}

void simulate_to_directory(const ScenarioConfig &cfg, const std::string &out_dir)
{
    cfg.validate();
    ensure_directory(out_dir);
    for (int run = 0; run < cfg.num_monte_carlo_runs; ++run)
    {
        const SimulatedRun sim = simulate_run(cfg, run);
        std::vector<CirProfile> flat;
        for (const auto &e : sim.epochs)
            flat.insert(flat.end(), e.begin(), e.end());
        write_cir_file((fs::path(out_dir) / ("cir_" + run_tag(run) + ".txt")).string(), flat);
        write_truth_csv((fs::path(out_dir) / ("truth_" + run_tag(run) + ".csv")).string(), sim.truth);
    }
}

std::vector<TrackerRun> track_to_directory(const ScenarioConfig &cfg, const std::string &out_dir,
                                           const std::optional<std::string> &cir_path,
                                           const std::optional<std::string> &truth_path)
{
    cfg.validate();
    ensure_directory(out_dir);
    std::vector<TrackerRun> runs;

    if (cir_path)
    {
        const std::vector<Epoch> epochs = group_epochs(read_cir_file(*cir_path));
        if (epochs.empty())
            throw ParseError("'" + *cir_path + "' holds no CIR records");

        std::vector<TimedPoint> truth;
        if (truth_path)
        {
            std::map<double, Point2D> by_time;
            for (const auto &p : read_truth_csv(*truth_path))
                by_time[p.t] = p.position;
            for (const auto &e : epochs)
            {
                auto it = by_time.find(e.front().timestamp);
                truth.push_back({e.front().timestamp, it == by_time.end() ? Point2D{kNaN, kNaN} : it->second});
            }
        }
        for (auto kind : cfg.trackers_to_run)
        {
            TrackerRun r = track_run(cfg, kind, 0, epochs, truth);
            for (auto &rec : r.records)
                if (!is_finite(rec.truth))
                    rec.error = kNaN;
            write_trajectory_csv((fs::path(out_dir) / trajectory_file_name(kind, 0)).string(), r);
            runs.push_back(std::move(r));
        }
        return runs;
    }

    for (int run = 0; run < cfg.num_monte_carlo_runs; ++run)
    {
        const SimulatedRun sim = simulate_run(cfg, run);
        for (auto kind : cfg.trackers_to_run)
        {
            TrackerRun r = track_run(cfg, kind, run, sim.epochs, sim.truth);
            write_trajectory_csv((fs::path(out_dir) / trajectory_file_name(kind, run)).string(), r);
            runs.push_back(std::move(r));
        }
    }
    return runs;
}

TrackResult run_to_directory(const ScenarioConfig &cfg, const std::string &out_dir, bool dump_cir)
{
    cfg.validate();
    ensure_directory(out_dir);
    TrackResult result;
    for (int run = 0; run < cfg.num_monte_carlo_runs; ++run)
    {
        const SimulatedRun sim = simulate_run(cfg, run);
        if (dump_cir)
        {
            std::vector<CirProfile> flat;
            for (const auto &e : sim.epochs)
                flat.insert(flat.end(), e.begin(), e.end());
            write_cir_file((fs::path(out_dir) / ("cir_" + run_tag(run) + ".txt")).string(), flat);
            write_truth_csv((fs::path(out_dir) / ("truth_" + run_tag(run) + ".csv")).string(), sim.truth);
        }
        for (auto kind : cfg.trackers_to_run)
        {
            TrackerRun r = track_run(cfg, kind, run, sim.epochs, sim.truth);
            write_trajectory_csv((fs::path(out_dir) / trajectory_file_name(kind, run)).string(), r);
            result.runs.push_back(std::move(r));
        }
    }
    result.summary = summarize(result.runs, cfg.trackers_to_run);
    write_metrics_json((fs::path(out_dir) / "metrics.json").string(), result.summary);
    return result;
}

} // namespace smtrack
