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

// Acceptance checks 1-8; prints one PASS/FAIL line per criterion.

#include "smtrack/channel.hpp"
#include "smtrack/geometry.hpp"
#include "smtrack/harness.hpp"
#include "smtrack/likelihood.hpp"
#include "smtrack/rng.hpp"
#include "smtrack/scenario.hpp"
#include "smtrack/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace smtrack;
namespace fs = std::filesystem;

namespace
{
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Point2D rand_point(Rng &g, double span)
{
    std::uniform_real_distribution<double> u(-span, span);
    return {u(g), u(g)};
}

// ---- 1 -------------------------------------------------------------------
Outcome geometry_properties()
{
    const auto t0 = Clock::now();
    Rng g(101);
    std::size_t cases = 0, image_cases = 0, bad = 0;
    double worst_inv = 0.0, worst_iso = 0.0, worst_img = 0.0;
    while (cases < 10000 || image_cases < 10000)
    {
        const Reflector r{1, rand_point(g, 25.0), rand_point(g, 25.0)};
        if (r.length() < 1e-3)
            continue;
        const Point2D p = rand_point(g, 25.0);
        const Point2D q = rand_point(g, 25.0);
        const Point2D mp = mirror_anchor(p, r);
        const double inv = distance(mirror_anchor(mp, r), p);
        const double iso = std::abs(distance(p, q) - distance(mp, mirror_anchor(q, r)));
        worst_inv = std::max(worst_inv, inv);
        worst_iso = std::max(worst_iso, iso);
        bad += (inv > 1e-12) + (iso > 1e-12);
        ++cases;

        const VirtualAnchor va{0, r.id, mp};
        if (const auto s = specular_reflection_point(q, va, r))
        {
            const double img = std::abs(distance(p, *s) + distance(*s, q) - distance(mp, q));
            worst_img = std::max(worst_img, img);
            bad += img > 1e-9;
            ++image_cases;
        }
    }
    const double dt = seconds_since(t0);
    return {bad == 0 && dt < 5.0,
            fmt("%.0f mirror cases, %.0f image-path cases", double(cases), double(image_cases)) +
                fmt(", worst involution %.1e, isometry %.1e, image path %.1e m", worst_inv, worst_iso, worst_img) +
                fmt(", %.2f s", dt)};
}

// ---- 2 -------------------------------------------------------------------
// 3-point Gauss-Legendre per linear piece
double reference_integral(const TruncatedPdf &pdf, const CirProfile &p)
{
    const double lo = pdf.center() - pdf.epsilon();
    const double hi = pdf.center() + pdf.epsilon();
    std::vector<double> cuts{lo, hi, 0.0};
    for (std::size_t k = 0; k < p.taps.size(); ++k)
        cuts.push_back(static_cast<double>(k) * p.tap_spacing);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        const double a = std::max(cuts[i], lo);
        const double b = std::min(cuts[i + 1], hi);
        if (!(b > a))
            continue;
        const double m = 0.5 * (a + b);
        const double h = 0.5 * (b - a) * 0.7745966692414834;
        acc += (b - a) / 18.0 * (5.0 * pdf(m - h) + 8.0 * pdf(m) + 5.0 * pdf(m + h));
    }
    return acc;
}

Outcome likelihood_normalization()
{
    Rng g(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::size_t fallbacks = 0;
    bool fallback_exact = true;
    for (int trial = 0; trial < 1000; ++trial)
    {
        const std::size_t n = 16 + g() % 200;
        CirProfile p{1, 0.0, 1.0016e-9, std::vector<double>(n)};
        const int style = trial % 4;
        for (auto &t : p.taps)
        {
            const double v = u(g);
            t = style == 0 ? v : style == 1 ? (v < 0.8 ? 0.0 : 10.0 * v) : style == 2 ? v * 1e-6 : std::exp(8.0 * v);
        }
        const double span = static_cast<double>(n) * p.tap_spacing;
        const double center = (u(g) * 1.2 - 0.1) * span;
        const double eps = (0.05 + 8.0 * u(g)) * p.tap_spacing;
        const auto pdf = truncated_pdf(p, center, eps);
        if (pdf.is_uniform_fallback())
            continue;
        worst = std::max(worst, std::abs(reference_integral(pdf, p) - 1.0));
    }

    // degenerate windows: all-zero taps, window past the profile, window before zero
    for (int trial = 0; trial < 300; ++trial)
    {
        CirProfile p{1, 0.0, 1e-9, std::vector<double>(64, 0.0)};
        double center = 20e-9;
        if (trial % 3 == 1)
        {
            std::fill(p.taps.begin(), p.taps.end(), u(g));
            center = 200e-9 + 100e-9 * u(g);
        }
        else if (trial % 3 == 2)
        {
            std::fill(p.taps.begin(), p.taps.end(), u(g));
            center = -50e-9 * (1.0 + u(g));
        }
        const double eps = (0.5 + 4.0 * u(g)) * 1e-9;
        const auto pdf = truncated_pdf(p, center, eps);
        ++fallbacks;
        const double expect = 1.0 / (2.0 * eps);
        fallback_exact = fallback_exact && pdf.is_uniform_fallback() && pdf(center) == expect &&
                         pdf(center + 0.5 * eps) == expect && pdf(center - 0.99 * eps) == expect &&
                         pdf(center + 1.5 * eps) == 0.0;
    }
    return {worst <= 1e-9 && fallback_exact,
            fmt("worst |integral - 1| = %.2e over 1000 profiles, %.0f degenerate windows ", worst, double(fallbacks)) +
                (fallback_exact ? "exact uniform" : "NOT uniform")};
}

// ---- 3 -------------------------------------------------------------------
std::vector<double> hand_eq7(const std::vector<double> &l)
{
    const double n = static_cast<double>(l.size());
    double mean = 0.0;
    for (double v : l)
        mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : l)
        var += (v - mean) * (v - mean);
    var /= n;
    std::vector<double> w(l.size(), 1.0 / n);
    if (var == 0.0)
        return w;
    double omin = 1e300;
    for (double v : l)
        omin = std::min(omin, (1.0 - v) * (1.0 - v));
    double total = 0.0;
    for (std::size_t k = 0; k < l.size(); ++k)
    {
        const double o = (1.0 - l[k]) * (1.0 - l[k]);
        w[k] = std::exp(-(o - omin) / (2.0 * var));
        total += w[k];
    }
    for (double &v : w)
        v /= total;
    return w;
}

Outcome eq7_oracle()
{
    Rng g(303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    bool identity = true;
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t k = 2 + g() % 300;
        std::vector<double> l(k);
        if (trial % 10 == 0)
            std::fill(l.begin(), l.end(), u(g)); // sigma_c = 0
        else
            for (auto &v : l)
                v = trial % 3 == 0 ? std::pow(u(g), 4.0) : u(g);
        const auto [w, stats] = compute_weights(l);
        const auto ref = hand_eq7(l);
        for (std::size_t i = 0; i < k; ++i)
            worst = std::max(worst, std::abs(w[i] - ref[i]) / ref[i]);

        const auto raw = unnormalized_weights(l);
        const auto best = static_cast<std::size_t>(std::max_element(l.begin(), l.end()) - l.begin());
        identity = identity && raw[best] == 1.0;
        if (trial % 10 == 0)
            identity = identity && stats.sigma_c == 0.0;
    }
    return {worst <= 1e-12 && identity, fmt("worst relative error %.2e over 100 vectors, ", worst) +
                                            (identity ? "argmax weight 1 and sigma_c = 0 fallback hold"
                                                      : "identity FAILED")};
}

// ---- 4 -------------------------------------------------------------------
Outcome resampling_counts()
{
    Rng g(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t k = 200;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        std::vector<double> w(k);
        const double power = 1.0 + 10.0 * u(g);
        for (auto &v : w)
            v = std::pow(u(g), power);
        if (trial % 50 == 0)
            std::fill(w.begin(), w.end(), 0.0), w[g() % k] = 1.0;
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto &v : w)
            v /= total;
        const auto idx = systematic_indices(w, u(g) / static_cast<double>(k));
        std::vector<double> count(k, 0.0);
        for (auto i : idx)
            count[i] += 1.0;
        for (std::size_t i = 0; i < k; ++i)
            worst = std::max(worst, std::abs(count[i] - static_cast<double>(k) * w[i]));
    }
    return {worst < 1.0, fmt("max |count - K w| = %.6f over 1000 vectors, K = 200", worst)};
}

// ---- 5 -------------------------------------------------------------------
double lerp_profile(const CirProfile &p, double delay)
{
    const double pos = delay / p.tap_spacing;
    if (pos < 0.0 || pos > static_cast<double>(p.taps.size() - 1))
        return 0.0;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= p.taps.size())
        return p.taps[i];
    return p.taps[i] + (pos - static_cast<double>(i)) * (p.taps[i + 1] - p.taps[i]);
}

Outcome grid_map_oracle()
{
    const auto t0 = Clock::now();
    FloorPlan plan;
    plan.anchors = {{1, {0.5, 0.5}}, {2, {11.5, 1.0}}, {3, {6.0, 9.5}}};
    plan.reflectors = {{1, {0.0, -1.0}, {0.0, 11.0}}, {2, {-1.0, 10.0}, {13.0, 10.0}}};
    const Point2D truth{4.3, 4.1};

    ChannelConfig ch;
    ch.dmc_onset_power = 0.0;
    ch.noise_floor_power = 0.0;
    std::vector<CirProfile> profiles;
    for (const auto &a : plan.anchors)
    {
        Rng rng(1);
        profiles.push_back(synthesize_cir(enumerate_paths(truth, a, plan, ch), ch, rng, a.id, 0.0));
    }

    TrackerConfig cfg;
    cfg.num_particles = 200;
    cfg.rng_seed = 5;
    cfg.velocity_noise_std = 0.1; // static tag
    SoftMultipathTracker tracker(plan, cfg);
    tracker.initialize({truth.x + 0.25, truth.y - 0.2});
    TagState est = tracker.update(profiles);
    for (int i = 0; i < 20; ++i)
        est = tracker.step(profiles, 0.1);

    // links: LoS per anchor plus each virtual anchor with a valid specular path at the estimate
    struct Link
    {
        const CirProfile *profile;
        Point2D source;
    };
    std::vector<Link> links;
    for (std::size_t i = 0; i < plan.anchors.size(); ++i)
    {
        links.push_back({&profiles[i], plan.anchors[i].position});
        for (const auto &r : plan.reflectors)
        {
            const VirtualAnchor va{plan.anchors[i].id, r.id, mirror_anchor(plan.anchors[i].position, r)};
            if (specular_reflection_point(est.position, va, r))
                links.push_back({&profiles[i], va.position});
        }
    }

    // 1 cm grid over the whole room
    const int nx = 1201, ny = 1001;
    std::vector<double> objective(static_cast<std::size_t>(nx) * ny, 0.0);
    std::vector<double> sample(objective.size());
    for (const auto &link : links)
    {
        double peak = 0.0;
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
            {
                const Point2D p{0.01 * ix, 0.01 * iy};
                const double v = lerp_profile(*link.profile, distance(p, link.source) / kSpeedOfLight);
                sample[static_cast<std::size_t>(iy) * nx + ix] = v;
                peak = std::max(peak, v);
            }
        for (std::size_t i = 0; i < sample.size(); ++i)
            objective[i] += std::log(std::max(sample[i] / peak, cfg.likelihood.floor_probability));
    }
    const auto best = static_cast<std::size_t>(std::max_element(objective.begin(), objective.end()) - objective.begin());
    const Point2D map{0.01 * static_cast<double>(best % nx), 0.01 * static_cast<double>(best / nx)};
    const double gap = distance(map, est.position);
    const double dt = seconds_since(t0);
    return {gap <= 0.05 && dt < 30.0,
            fmt("estimate (%.3f, %.3f), grid MAP (%.2f, %.2f)", est.position.x, est.position.y, map.x, map.y) +
                fmt(", gap %.3f m, %.0f links, %.2f s", gap, double(links.size()), dt)};
}

// ---- 6 / 7 ---------------------------------------------------------------
struct P90s
{
    double baseline = 0.0, los = 0.0, smc = 0.0;
};

P90s p90s(const TrackResult &r)
{
    return {r.find(TrackerKind::Baseline)->p90, r.find(TrackerKind::ProposedLosOnly)->p90,
            r.find(TrackerKind::ProposedSmc)->p90};
}

Outcome ordering(const P90s &p, double seconds)
{
    const double gain = 1.0 - p.smc / p.baseline;
    const bool ok = p.smc < p.los && p.los < p.baseline && gain >= 0.40 && seconds < 300.0;
    return {ok, fmt("p90 smc %.3f < los_only %.3f < baseline %.3f m, improvement %.1f%%", p.smc, p.los, p.baseline,
                    100.0 * gain) +
                    fmt(", %.1f s", seconds)};
}

Outcome anchor_trend(const P90s &p3, const P90s &p4)
{
    const double gain = 1.0 - p3.los / p3.baseline;
    const bool ok = p4.baseline <= p3.baseline && p4.los <= p3.los && p4.smc <= p3.smc && gain >= 0.30;
    return {ok, fmt("baseline %.3f -> %.3f, los_only %.3f -> %.3f", p3.baseline, p4.baseline, p3.los, p4.los) +
                    fmt(", smc %.3f -> %.3f m; los_only vs baseline %.1f%%", p3.smc, p4.smc, 100.0 * gain)};
}

// ---- 8 -------------------------------------------------------------------
std::string slurp(const fs::path &p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    const fs::path root = fs::temp_directory_path() / "smtrack_acceptance_determinism";
    fs::remove_all(root);
    const std::string cli = SMTRACK_CLI_PATH;
    for (const char *leaf : {"a", "b"})
    {
        const std::string cmd = "\"" + cli + "\" run --anchors 3 --seed 4242 --runs 3 --out \"" +
                                (root / leaf).string() + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0)
            return {false, "cli run failed: " + cmd};
    }
    std::size_t compared = 0, differing = 0;
    for (const auto &entry : fs::directory_iterator(root / "a"))
    {
        const auto ext = entry.path().extension();
        if (ext != ".csv" && ext != ".json")
            continue;
        ++compared;
        const fs::path other = root / "b" / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other))
            ++differing;
    }
    std::size_t in_b = 0;
    for (const auto &entry : fs::directory_iterator(root / "b"))
        in_b += entry.path().extension() == ".csv" || entry.path().extension() == ".json";
    fs::remove_all(root);
    return {compared == 10 && in_b == compared && differing == 0,
            fmt("%.0f files compared, %.0f differ", double(compared), double(differing + (in_b != compared)))};
}
} // namespace

int main()
{
    int failures = 0;
    auto report = [&](int id, const char *name, const std::function<Outcome()> &check) {
        Outcome o;
        try
        {
            o = check();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
    };

    report(1, "geometry properties", geometry_properties);
    report(2, "likelihood normalization", likelihood_normalization);
    report(3, "weight oracle", eq7_oracle);
    report(4, "systematic resampling counts", resampling_counts);
    report(5, "static grid MAP", grid_map_oracle);

    TrackResult r3, r4;
    double t3 = 0.0;
    bool have3 = false;
    report(6, "cluttered scenario ordering", [&] {
        const auto t0 = Clock::now();
        r3 = run_scenario(default_scenario(3));
        t3 = seconds_since(t0);
        have3 = true;
        return ordering(p90s(r3), t3);
    });
    report(7, "anchor count trend", [&]() -> Outcome {
        if (!have3)
            return {false, "3-anchor run unavailable"};
        r4 = run_scenario(default_scenario(4));
        return anchor_trend(p90s(r3), p90s(r4));
    });
    report(8, "determinism", determinism);

    std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
