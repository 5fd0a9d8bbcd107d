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

#include "smtrack/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smtrack
{
namespace
{
double free_space_amplitude(double distance_m, const ChannelConfig &cfg)
{
    return cfg.reference_gain_at_1m / std::pow(std::max(distance_m, 1.0), cfg.path_loss_exponent / 2.0);
}
} // namespace

void ChannelConfig::validate() const
{
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("channel.bandwidth must be > 0");
    if (!(tap_spacing > 0.0))
        throw std::invalid_argument("channel.tap_spacing must be > 0");
    if (num_taps < 16)
        throw std::invalid_argument("channel.num_taps must be >= 16");
    if (!(reflection_loss > 0.0 && reflection_loss <= 1.0))
        throw std::invalid_argument("channel.reflection_loss must be in (0, 1]");
    if (!(dmc_decay_constant > 0.0))
        throw std::invalid_argument("channel.dmc_decay_constant must be > 0");
    if (!(reference_gain_at_1m >= 0.0) || !(dmc_onset_power >= 0.0) || !(noise_floor_power >= 0.0))
        throw std::invalid_argument("channel gains and powers must be non-negative");
    if (!std::isfinite(path_loss_exponent))
        throw std::invalid_argument("channel.path_loss_exponent must be finite");
}

double pulse_shape(double t, double bandwidth)
{
    const double half = pulse_half_support(bandwidth);
    if (std::abs(t) >= half)
        return 0.0;
    if (t == 0.0)
        return 1.0;
    const double x = std::numbers::pi * bandwidth * t;
    const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * t / half));
    return std::sin(x) / x * window;
}

std::vector<PathComponent> enumerate_paths(const Point2D &tag, const Anchor &anchor, const FloorPlan &plan,
                                           const ChannelConfig &cfg)
{
    std::vector<PathComponent> out;

    if (!los_blocked(tag, anchor.position, plan.obstacles))
    {
        const double d = distance(tag, anchor.position);
        out.push_back({PathKind::LoS, d / kSpeedOfLight, free_space_amplitude(d, cfg), std::nullopt});
    }

    for (const auto &reflector : plan.reflectors)
    {
        const VirtualAnchor va{anchor.id, reflector.id, mirror_anchor(anchor.position, reflector)};
        const auto hit = specular_reflection_point(tag, va, reflector);
        if (!hit)
            continue;
        if (cfg.check_reflected_blockage &&
            (los_blocked(anchor.position, *hit, plan.obstacles) || los_blocked(*hit, tag, plan.obstacles)))
            continue;
        const double d = distance(tag, va.position);
        out.push_back({PathKind::Smc, d / kSpeedOfLight, cfg.reflection_loss * free_space_amplitude(d, cfg),
                       PathSource{anchor.id, reflector.id}});
    }
    return out;
}

CirProfile synthesize_cir(std::span<const PathComponent> components, const ChannelConfig &cfg, Rng &rng,
                          int anchor_id, double timestamp)
{
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.num_taps);
    const double window = cfg.window();
    const double half = pulse_half_support(cfg.bandwidth);

    std::vector<std::complex<double>> h(n);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);

    double first_delay = window;
    double strongest_power = 0.0;
    for (const auto &c : components)
    {
        if (!(c.delay >= 0.0 && c.delay < window))
            throw std::invalid_argument("synthesize_cir: component delay " + std::to_string(c.delay) +
                                        " s outside profile window");
        const std::complex<double> alpha = std::polar(c.amplitude, phase_dist(rng));

        const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil((c.delay - half) / cfg.tap_spacing)));
        const auto hi = std::min(n - 1, static_cast<std::size_t>(std::floor((c.delay + half) / cfg.tap_spacing)));
        for (std::size_t k = lo; k <= hi; ++k)
            h[k] += alpha * pulse_shape(static_cast<double>(k) * cfg.tap_spacing - c.delay, cfg.bandwidth);

        first_delay = std::min(first_delay, c.delay);
        strongest_power = std::max(strongest_power, c.amplitude * c.amplitude);
    }

    const double dmc_scale = cfg.dmc_onset_power * strongest_power;
    if (dmc_scale > 0.0 || cfg.noise_floor_power > 0.0)
    {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t k = 0; k < n; ++k)
        {
            const double tau = static_cast<double>(k) * cfg.tap_spacing;
            double variance = cfg.noise_floor_power;
            if (!components.empty() && tau >= first_delay)
                variance += dmc_scale * std::exp(-(tau - first_delay) / cfg.dmc_decay_constant);
            const double sd = std::sqrt(variance / 2.0);
            const double re = gauss(rng);
            const double im = gauss(rng);
            h[k] += std::complex<double>(re * sd, im * sd);
        }
    }

    CirProfile out;
    out.anchor_id = anchor_id;
    out.timestamp = timestamp;
    out.tap_spacing = cfg.tap_spacing;
    out.taps.resize(n);
    std::transform(h.begin(), h.end(), out.taps.begin(), [](const std::complex<double> &v) { return std::abs(v); });
    return out;
}

} // namespace smtrack
