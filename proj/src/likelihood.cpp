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

#include "smtrack/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smtrack
{
void LikelihoodConfig::validate() const
{
    if (!(neighborhood_radius > 0.0))
        throw std::invalid_argument("likelihood.neighborhood_radius must be > 0");
    if (!(floor_probability > 0.0 && floor_probability < 1.0))
        throw std::invalid_argument("likelihood.floor_probability must be in (0, 1)");
}

double sample_profile(const CirProfile &profile, double delay)
{
    if (delay < 0.0 || std::isnan(delay))
        throw std::invalid_argument("sample_profile: negative delay");
    const auto &taps = profile.taps;
    if (taps.empty())
        return 0.0;

    const double pos = delay / profile.tap_spacing;
    const double last = static_cast<double>(taps.size() - 1);
    if (pos > last)
        return 0.0;
    const auto k = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(k);
    if (frac == 0.0 || k + 1 >= taps.size())
        return taps[k];
    return taps[k] + frac * (taps[k + 1] - taps[k]);
}

TruncatedPdf::TruncatedPdf(const CirProfile &profile, double center, double epsilon)
    : profile_(&profile), center_(center), epsilon_(epsilon)
{
    if (!(epsilon > 0.0))
        throw std::invalid_argument("truncated_pdf: epsilon must be > 0");

    // Trapezoid over the window, broken at every tap inside it. The
    // interpolant is piecewise linear, so this integral is exact.
    const double ts = profile.tap_spacing;
    const double support_end = profile.taps.empty() ? 0.0 : static_cast<double>(profile.taps.size() - 1) * ts;
    const double lo = std::max(center - epsilon, 0.0);
    const double hi = std::min(center + epsilon, support_end);

    double mass = 0.0;
    if (hi > lo)
    {
        double prev_t = lo;
        double prev_v = sample_profile(profile, lo);
        auto k = static_cast<std::size_t>(std::floor(lo / ts)) + 1;
        for (; static_cast<double>(k) * ts < hi; ++k)
        {
            const double t = static_cast<double>(k) * ts;
            const double v = profile.taps[k];
            mass += 0.5 * (prev_v + v) * (t - prev_t);
            prev_t = t;
            prev_v = v;
        }
        mass += 0.5 * (prev_v + sample_profile(profile, hi)) * (hi - prev_t);
    }
    mass_ = mass;
    uniform_ = !(mass > 0.0);
}

double TruncatedPdf::operator()(double delay) const
{
    if (!(std::abs(delay - center_) < epsilon_))
        return 0.0;
    if (uniform_)
        return 1.0 / (2.0 * epsilon_);
    if (delay < 0.0)
        return 0.0;
    return sample_profile(*profile_, delay) / mass_;
}

TruncatedPdf truncated_pdf(const CirProfile &profile, double center_delay, double epsilon)
{
    return TruncatedPdf(profile, center_delay, epsilon);
}

double particle_link_likelihood(const CirProfile &profile, const Point2D &particle_position,
                                const Point2D &anchor_or_va_position)
{
    return sample_profile(profile, path_delay(particle_position, anchor_or_va_position));
}

std::vector<double> combine_particle_likelihood(const LinkSamples &raw, const LikelihoodConfig &cfg)
{
    const std::size_t k_count = raw.num_particles();
    const std::size_t links = raw.num_links();
    if (k_count == 0 || links == 0)
        throw std::invalid_argument("combine_particle_likelihood: empty input");

    std::vector<double> log_l(k_count, 0.0);
    const double log_floor = std::log(cfg.floor_probability);
    for (std::size_t l = 0; l < links; ++l)
    {
        double peak = 0.0;
        for (std::size_t k = 0; k < k_count; ++k)
            peak = std::max(peak, raw.at(l, k));
        for (std::size_t k = 0; k < k_count; ++k)
        {
            const double v = peak > 0.0 ? raw.at(l, k) / peak : 0.0;
            log_l[k] += v > cfg.floor_probability ? std::log(v) : log_floor;
        }
    }

    const double best = *std::max_element(log_l.begin(), log_l.end());
    std::vector<double> out(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
        out[k] = std::max(std::exp(log_l[k] - best), std::numeric_limits<double>::min());
    return out;
}

} // namespace smtrack
