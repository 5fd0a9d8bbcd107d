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

#include "smtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smtrack
{
namespace
{
struct Link
{
    const CirProfile *profile;
    Point2D source;
};

// LoS link per profiled anchor, plus one link per virtual anchor whose
// specular path is valid at the current (predicted) estimate.
std::vector<Link> build_links(std::span<const CirProfile> profiles, const FloorPlan &plan, bool use_smc,
                              const Point2D &reference)
{
    std::vector<Link> links;
    for (const auto &profile : profiles)
    {
        const Anchor *anchor = plan.find_anchor(profile.anchor_id);
        if (!anchor)
            continue;
        links.push_back({&profile, anchor->position});
        if (!use_smc)
            continue;
        for (const auto &reflector : plan.reflectors)
        {
            const VirtualAnchor va{anchor->id, reflector.id, mirror_anchor(anchor->position, reflector)};
            if (specular_reflection_point(reference, va, reflector))
                links.push_back({&profile, va.position});
        }
    }
    return links;
}

void normalize_in_place(std::vector<double> &w)
{
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double &v : w)
        v /= total;
}
} // namespace

void ParticleSet::validate() const
{
    if (states.size() < 2)
        throw std::invalid_argument("particle set needs at least 2 particles");
    if (weights.size() != states.size())
        throw std::invalid_argument("particle set weights and states differ in size");
    double total = 0.0;
    for (double w : weights)
    {
        if (!(w >= 0.0))
            throw std::invalid_argument("particle weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("particle weights must sum to 1");
}

void TrackerConfig::validate() const
{
    if (num_particles < 2)
        throw std::invalid_argument("tracker.num_particles must be >= 2");
    if (!(velocity_noise_std >= 0.0) || !(init_position_std >= 0.0) || !(init_velocity_std >= 0.0))
        throw std::invalid_argument("tracker noise standard deviations must be >= 0");
    if (!(resample_threshold_ess_fraction > 0.0 && resample_threshold_ess_fraction <= 1.0))
        throw std::invalid_argument("tracker.resample_threshold_ess_fraction must be in (0, 1]");
    likelihood.validate();
}

double effective_sample_size(std::span<const double> weights)
{
    double sq = 0.0;
    for (double w : weights)
        sq += w * w;
    return sq > 0.0 ? 1.0 / sq : 0.0;
}

ParticleSet initialize(const Point2D &first_fix, const TrackerConfig &cfg, Rng &rng)
{
    cfg.validate();
    std::normal_distribution<double> gauss(0.0, 1.0);
    ParticleSet out;
    out.states.resize(cfg.num_particles);
    out.weights.assign(cfg.num_particles, 1.0 / static_cast<double>(cfg.num_particles));
    for (auto &s : out.states)
    {
        s.position.x = first_fix.x + cfg.init_position_std * gauss(rng);
        s.position.y = first_fix.y + cfg.init_position_std * gauss(rng);
        s.velocity.x = cfg.init_velocity_std * gauss(rng);
        s.velocity.y = cfg.init_velocity_std * gauss(rng);
    }
    return out;
}

ParticleSet predict(ParticleSet particles, double dt, const TrackerConfig &cfg, Rng &rng)
{
    if (!(dt > 0.0))
        throw std::invalid_argument("predict: dt must be > 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto &s : particles.states)
    {
        const Vec2 n{cfg.velocity_noise_std * gauss(rng), cfg.velocity_noise_std * gauss(rng)};
        s.position += dt * s.velocity + dt * n;
        s.velocity += n;
    }
    return particles;
}

std::vector<double> unnormalized_weights(std::span<const double> likelihoods)
{
    const std::size_t k_count = likelihoods.size();
    if (k_count == 0)
        throw std::invalid_argument("compute_weights: empty likelihood vector");

    const double mean = std::accumulate(likelihoods.begin(), likelihoods.end(), 0.0) / static_cast<double>(k_count);
    double var = 0.0;
    for (double l : likelihoods)
        var += (l - mean) * (l - mean);
    var /= static_cast<double>(k_count);

    const bool all_equal = std::all_of(likelihoods.begin(), likelihoods.end(),
                                       [&](double l) { return l == likelihoods.front(); });
    if (all_equal || !(var > 0.0))
        return std::vector<double>(k_count, 1.0);

    std::vector<double> omega(k_count);
    std::transform(likelihoods.begin(), likelihoods.end(), omega.begin(),
                   [](double l) { return (1.0 - l) * (1.0 - l); });
    const double omega_min = *std::min_element(omega.begin(), omega.end());

    std::vector<double> w(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
        w[k] = std::exp((omega_min - omega[k]) / (2.0 * var));
    return w;
}

std::pair<std::vector<double>, WeightStats> compute_weights(std::span<const double> likelihoods)
{
    std::vector<double> w = unnormalized_weights(likelihoods);
    normalize_in_place(w);

    const double k_count = static_cast<double>(likelihoods.size());
    const double mean = std::accumulate(likelihoods.begin(), likelihoods.end(), 0.0) / k_count;
    double var = 0.0;
    for (double l : likelihoods)
        var += (l - mean) * (l - mean);

    const bool all_equal = std::all_of(likelihoods.begin(), likelihoods.end(),
                                       [&](double l) { return l == likelihoods.front(); });
    WeightStats stats;
    stats.sigma_c = all_equal ? 0.0 : std::sqrt(var / k_count);
    stats.ess = effective_sample_size(w);
    return {std::move(w), stats};
}

std::vector<std::size_t> systematic_indices(std::span<const double> weights, double u)
{
    const std::size_t k_count = weights.size();
    if (k_count == 0)
        throw std::invalid_argument("systematic_indices: empty weights");

    std::vector<double> cum(k_count);
    std::partial_sum(weights.begin(), weights.end(), cum.begin());
    const double total = cum.back();
    if (!(total > 0.0))
        throw std::invalid_argument("systematic_indices: weights sum to zero");
    for (double &c : cum)
        c /= total;

    std::vector<std::size_t> idx(k_count);
    std::size_t i = 0;
    const double kd = static_cast<double>(k_count);
    for (std::size_t j = 0; j < k_count; ++j)
    {
        const double point = (static_cast<double>(j) + u * kd) / kd;
        while (i + 1 < k_count && point >= cum[i])
            ++i;
        idx[j] = i;
    }
    return idx;
}

ParticleSet systematic_resample(const ParticleSet &particles, Rng &rng)
{
    const std::size_t k_count = particles.size();
    std::uniform_real_distribution<double> offset(0.0, 1.0 / static_cast<double>(k_count));
    const auto idx = systematic_indices(particles.weights, offset(rng));

    ParticleSet out;
    out.states.reserve(k_count);
    for (std::size_t i : idx)
        out.states.push_back(particles.states[i]);
    out.weights.assign(k_count, 1.0 / static_cast<double>(k_count));
    return out;
}

TagState estimate(const ParticleSet &particles)
{
    TagState out;
    double total = 0.0;
    for (std::size_t k = 0; k < particles.size(); ++k)
    {
        const double w = particles.weights[k];
        out.position += w * particles.states[k].position;
        out.velocity += w * particles.states[k].velocity;
        total += w;
    }
    if (total > 0.0)
    {
        out.position *= 1.0 / total;
        out.velocity *= 1.0 / total;
    }
    return out;
}

TagState correct(ParticleSet &particles, std::span<const CirProfile> profiles, const FloorPlan &plan,
                 const TrackerConfig &cfg, Rng &rng, WeightStats *stats)
{
    if (profiles.empty())
        throw std::invalid_argument("tracker: no CIR profiles for this epoch");

    const Point2D reference = estimate(particles).position;
    const auto links = build_links(profiles, plan, cfg.likelihood.use_smc, reference);
    if (links.empty())
        throw std::invalid_argument("tracker: no profile matches an anchor of the floor plan");

    const std::size_t k_count = particles.size();
    LinkSamples raw(k_count, links.size());
    for (std::size_t l = 0; l < links.size(); ++l)
        for (std::size_t k = 0; k < k_count; ++k)
            raw.at(l, k) = particle_link_likelihood(*links[l].profile, particles.states[k].position, links[l].source);

    const auto location = combine_particle_likelihood(raw, cfg.likelihood);
    auto [w_hat, ws] = compute_weights(location);

    // sequential importance weighting on top of the previous weights
    std::vector<double> w(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
        w[k] = particles.weights[k] * w_hat[k];
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (total > 0.0 && std::isfinite(total))
        normalize_in_place(w);
    else
        w = w_hat;
    particles.weights = std::move(w);
    ws.ess = effective_sample_size(particles.weights);

    const TagState est = estimate(particles);
    if (ws.ess < cfg.resample_threshold_ess_fraction * static_cast<double>(k_count))
        particles = systematic_resample(particles, rng);
    if (stats)
        *stats = ws;
    return est;
}

std::pair<ParticleSet, TagState> step(ParticleSet particles, std::span<const CirProfile> profiles,
                                      const FloorPlan &plan, double dt, const TrackerConfig &cfg, Rng &rng)
{
    if (profiles.empty())
        throw std::invalid_argument("tracker: no CIR profiles for this epoch");
    particles = predict(std::move(particles), dt, cfg, rng);
    const TagState est = correct(particles, profiles, plan, cfg, rng);
    return {std::move(particles), est};
}

SoftMultipathTracker::SoftMultipathTracker(FloorPlan plan, TrackerConfig cfg)
    : plan_(std::move(plan)), cfg_(std::move(cfg)), rng_(splitmix64(cfg_.rng_seed))
{
    plan_.validate();
    cfg_.validate();
}

void SoftMultipathTracker::initialize(const Point2D &first_fix)
{
    particles_ = smtrack::initialize(first_fix, cfg_, rng_);
    initialized_ = true;
}

TagState SoftMultipathTracker::update(std::span<const CirProfile> profiles)
{
    if (!initialized_)
        throw std::logic_error("tracker used before initialize()");
    return correct(particles_, profiles, plan_, cfg_, rng_, &stats_);
}

TagState SoftMultipathTracker::step(std::span<const CirProfile> profiles, double dt)
{
    if (!initialized_)
        throw std::logic_error("tracker used before initialize()");
    if (profiles.empty())
        throw std::invalid_argument("tracker: no CIR profiles for this epoch");
    if (!(dt > 0.0))
        throw std::invalid_argument("predict: dt must be > 0");
    particles_ = predict(std::move(particles_), dt, cfg_, rng_);
    return correct(particles_, profiles, plan_, cfg_, rng_, &stats_);
}

} // namespace smtrack
