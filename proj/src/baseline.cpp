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

#include "smtrack/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smtrack
{
void LdeConfig::validate() const
{
    if (noise_window_taps <= 0 || !(threshold_noise_multiplier > 0.0))
        throw std::invalid_argument("lde: noise window and multiplier must be positive");
    if (!(threshold_peak_fraction > 0.0 && threshold_peak_fraction < 1.0))
        throw std::invalid_argument("lde.threshold_peak_fraction must be in (0, 1)");
    if (!(backtrack_fraction > 0.0 && backtrack_fraction < 1.0))
        throw std::invalid_argument("lde.backtrack_fraction must be in (0, 1)");
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("lde.bandwidth must be > 0");
}

void BaselineConfig::validate() const
{
    tracker.validate();
    if (!(range_std > 0.0))
        throw std::invalid_argument("baseline range_std must be > 0");
}

double leading_edge_offset(const LdeConfig &cfg)
{
    // pulse_shape rises monotonically on (-1/B, 0); bisect for the crossing
    double lo = -1.0 / cfg.bandwidth;
    double hi = 0.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (pulse_shape(mid, cfg.bandwidth) < cfg.backtrack_fraction)
            lo = mid;
        else
            hi = mid;
    }
    return -0.5 * (lo + hi);
}

RangeMeasurement lde_first_path(const CirProfile &profile, const LdeConfig &cfg)
{
    cfg.validate();
    RangeMeasurement out{profile.anchor_id, 0.0, false};
    const auto &taps = profile.taps;
    const std::size_t n = taps.size();
    if (n == 0)
        return out;

    const std::size_t window = std::min<std::size_t>(static_cast<std::size_t>(cfg.noise_window_taps), n);
    const double noise_floor =
        std::accumulate(taps.begin(), taps.begin() + static_cast<std::ptrdiff_t>(window), 0.0) /
        static_cast<double>(window);
    const double peak = *std::max_element(taps.begin(), taps.end());
    const double threshold = std::max(noise_floor * cfg.threshold_noise_multiplier, peak * cfg.threshold_peak_fraction);

    auto first = std::find_if(taps.begin(), taps.end(), [threshold](double v) { return v > threshold; });
    if (first == taps.end())
        return out;

    // climb to the local peak of the first path, then walk back down its edge
    auto p = static_cast<std::size_t>(first - taps.begin());
    while (p + 1 < n && taps[p + 1] >= taps[p])
        ++p;
    const double level = cfg.backtrack_fraction * taps[p];
    std::size_t j = p;
    while (j > 0 && taps[j] >= level)
        --j;

    double edge = 0.0; // in taps
    if (taps[j] < level)
        edge = static_cast<double>(j) + (level - taps[j]) / (taps[j + 1] - taps[j]);

    const double delay = edge * profile.tap_spacing + leading_edge_offset(cfg);
    out.range = std::max(0.0, delay) * kSpeedOfLight;
    out.valid = true;
    return out;
}

Point2D trilaterate(std::span<const RangeMeasurement> measurements, std::span<const Anchor> anchors)
{
    std::vector<Point2D> pos;
    std::vector<double> rng;
    for (const auto &m : measurements)
    {
        if (!m.valid)
            continue;
        auto it = std::find_if(anchors.begin(), anchors.end(), [&](const Anchor &a) { return a.id == m.anchor_id; });
        if (it == anchors.end())
            continue;
        pos.push_back(it->position);
        rng.push_back(m.range);
    }
    if (pos.size() < 3)
        throw std::invalid_argument("trilaterate: need at least 3 valid measurements, got " +
                                    std::to_string(pos.size()));

    double scale = 0.0;
    for (const auto &p : pos)
        scale = std::max(scale, distance(p, pos[0]));
    double area = 0.0;
    for (std::size_t i = 1; i < pos.size(); ++i)
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            area = std::max(area, std::abs(cross(pos[i] - pos[0], pos[j] - pos[0])));
    if (!(scale > 0.0) || area <= 1e-9 * scale * scale)
        throw std::invalid_argument("trilaterate: anchors are collinear");

    Point2D x{};
    for (const auto &p : pos)
        x += p;
    x *= 1.0 / static_cast<double>(pos.size());

    for (int iter = 0; iter < 50; ++iter)
    {
        // normal equations of the 2-parameter problem
        double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
        for (std::size_t i = 0; i < pos.size(); ++i)
        {
            const Vec2 d = x - pos[i];
            const double r = norm(d);
            if (r < 1e-12)
                continue;
            const Vec2 u = d * (1.0 / r);
            const double res = r - rng[i];
            a11 += u.x * u.x;
            a12 += u.x * u.y;
            a22 += u.y * u.y;
            b1 -= u.x * res;
            b2 -= u.y * res;
        }
        const double det = a11 * a22 - a12 * a12;
        if (std::abs(det) < 1e-15)
            break;
        const Vec2 delta{(a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det};
        x += delta;
        if (norm(delta) < 1e-6)
            break;
    }
    return x;
}

RangeParticleFilter::RangeParticleFilter(std::vector<Anchor> anchors, BaselineConfig cfg)
    : anchors_(std::move(anchors)), cfg_(std::move(cfg)), rng_(splitmix64(cfg_.tracker.rng_seed))
{
    cfg_.validate();
}

void RangeParticleFilter::initialize(const Point2D &first_fix)
{
    particles_ = smtrack::initialize(first_fix, cfg_.tracker, rng_);
    initialized_ = true;
}

double RangeParticleFilter::log_likelihood(const Point2D &p, std::span<const RangeMeasurement> measurements) const
{
    const double inv = 1.0 / (2.0 * cfg_.range_std * cfg_.range_std);
    double acc = 0.0;
    for (const auto &m : measurements)
    {
        if (!m.valid)
            continue;
        auto it =
            std::find_if(anchors_.begin(), anchors_.end(), [&](const Anchor &a) { return a.id == m.anchor_id; });
        if (it == anchors_.end())
            continue;
        const double e = distance(p, it->position) - m.range;
        acc -= e * e * inv;
    }
    return acc;
}

TagState RangeParticleFilter::update(std::span<const RangeMeasurement> measurements)
{
    if (!initialized_)
        throw std::logic_error("range filter used before initialize()");

    const bool any_valid = std::any_of(measurements.begin(), measurements.end(),
                                       [](const RangeMeasurement &m) { return m.valid; });
    if (!any_valid)
        return estimate(particles_);

    const std::size_t k_count = particles_.size();
    std::vector<double> logw(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
        logw[k] = std::log(particles_.weights[k]) + log_likelihood(particles_.states[k].position, measurements);
    const double best = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k)
    {
        particles_.weights[k] = std::exp(logw[k] - best);
        total += particles_.weights[k];
    }
    for (double &w : particles_.weights)
        w /= total;

    const TagState est = estimate(particles_);
    if (effective_sample_size(particles_.weights) <
        cfg_.tracker.resample_threshold_ess_fraction * static_cast<double>(k_count))
        particles_ = systematic_resample(particles_, rng_);
    return est;
}

TagState RangeParticleFilter::step(std::span<const RangeMeasurement> measurements, double dt)
{
    if (!initialized_)
        throw std::logic_error("range filter used before initialize()");
    if (!(dt > 0.0))
        throw std::invalid_argument("predict: dt must be > 0");
    particles_ = predict(std::move(particles_), dt, cfg_.tracker, rng_);
    return update(measurements);
}

std::vector<TagState> baseline_track(std::span<const RangeEpoch> stream, std::span<const Anchor> anchors,
                                     const BaselineConfig &cfg)
{
    if (stream.empty())
        throw std::invalid_argument("baseline_track: empty measurement stream");

    RangeParticleFilter filter(std::vector<Anchor>(anchors.begin(), anchors.end()), cfg);
    filter.initialize(trilaterate(stream.front().measurements, anchors));

    std::vector<TagState> out;
    out.reserve(stream.size());
    out.push_back(filter.update(stream.front().measurements));
    for (std::size_t i = 1; i < stream.size(); ++i)
        out.push_back(filter.step(stream[i].measurements, stream[i].dt));
    return out;
}

} // namespace smtrack
