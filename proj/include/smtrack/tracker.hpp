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

#ifndef SMTRACK_TRACKER_HPP
#define SMTRACK_TRACKER_HPP

#include "smtrack/channel.hpp"
#include "smtrack/geometry.hpp"
#include "smtrack/likelihood.hpp"
#include "smtrack/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace smtrack
{
struct TagState
{
    Point2D position; // m
    Vec2 velocity;    // m/s
};

struct ParticleSet
{
    std::vector<TagState> states;
    std::vector<double> weights;

    std::size_t size() const { return states.size(); }

    /// Throws std::invalid_argument unless K >= 2, sizes agree, weights are
    /// non-negative and sum to 1 within 1e-9.
    void validate() const;
};

struct TrackerConfig
{
    std::size_t num_particles = 200;
    double velocity_noise_std = 0.5;              // m/s, per axis
    double init_position_std = 0.3;               // m
    double init_velocity_std = 0.3;               // m/s
    double resample_threshold_ess_fraction = 0.5; // resample when ESS < fraction * K
    LikelihoodConfig likelihood;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct WeightStats
{
    double sigma_c = 0.0; // population std of the location likelihoods
    double ess = 0.0;     // effective sample size of the returned weights
};

double effective_sample_size(std::span<const double> weights);

/// K particles around `first_fix` with zero-mean Gaussian velocities and
/// uniform weights.
ParticleSet initialize(const Point2D &first_fix, const TrackerConfig &cfg, Rng &rng);

/// Constant-velocity propagation with independent per-axis velocity noise:
/// P += dt * v + dt * n, v += n. Throws std::invalid_argument for dt <= 0.
ParticleSet predict(ParticleSet particles, double dt, const TrackerConfig &cfg, Rng &rng);

/// Exponential weighting of normalized location likelihoods:
///   w_k = (1 - L_k)^2,  ln w^_k = (min_j w_j - w_k) / (2 sigma_c^2)
/// with sigma_c the population standard deviation of L. Uniform weights
/// when sigma_c = 0. Throws std::invalid_argument on empty input.
std::pair<std::vector<double>, WeightStats> compute_weights(std::span<const double> likelihoods);

/// Unnormalized weights of compute_weights (max exactly 1); exposed for tests.
std::vector<double> unnormalized_weights(std::span<const double> likelihoods);

/// Ancestor indices for systematic resampling with offset u in [0, 1/K).
std::vector<std::size_t> systematic_indices(std::span<const double> weights, double u);

/// Single-offset systematic resampling; the result has uniform weights.
ParticleSet systematic_resample(const ParticleSet &particles, Rng &rng);

/// Weighted mean of positions and velocities.
TagState estimate(const ParticleSet &particles);

/// Measurement update on already-predicted particles: link delays to physical
/// and virtual anchors, likelihood combination, weighting, and ESS-triggered
/// resampling. Returns the estimate taken before resampling.
TagState correct(ParticleSet &particles, std::span<const CirProfile> profiles, const FloorPlan &plan,
                 const TrackerConfig &cfg, Rng &rng, WeightStats *stats = nullptr);

/// predict followed by correct. Throws std::invalid_argument when `profiles`
/// is empty or matches no anchor of the plan.
std::pair<ParticleSet, TagState> step(ParticleSet particles, std::span<const CirProfile> profiles,
                                      const FloorPlan &plan, double dt, const TrackerConfig &cfg, Rng &rng);

// Sequential wrapper that owns the particle set and generator.
class SoftMultipathTracker
{
  public:
    SoftMultipathTracker(FloorPlan plan, TrackerConfig cfg);

    void initialize(const Point2D &first_fix);
    bool initialized() const { return initialized_; }

    /// Update without prediction, for the first epoch.
    TagState update(std::span<const CirProfile> profiles);
    TagState step(std::span<const CirProfile> profiles, double dt);

    const ParticleSet &particles() const { return particles_; }
    ParticleSet &particles() { return particles_; }
    const WeightStats &last_stats() const { return stats_; }
    const TrackerConfig &config() const { return cfg_; }

  private:
    FloorPlan plan_;
    TrackerConfig cfg_;
    Rng rng_;
    ParticleSet particles_;
    WeightStats stats_;
    bool initialized_ = false;
};

} // namespace smtrack

#endif
