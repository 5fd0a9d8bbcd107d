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

#ifndef SMTRACK_BASELINE_HPP
#define SMTRACK_BASELINE_HPP

// Conventional ToF pipeline used as the benchmark: leading-edge first-path
// detection, Gauss-Newton trilateration, and a particle filter driven by
// Gaussian range likelihoods.

#include "smtrack/channel.hpp"
#include "smtrack/geometry.hpp"
#include "smtrack/tracker.hpp"

#include <span>
#include <vector>

namespace smtrack
{
struct LdeConfig
{
    int noise_window_taps = 32;
    double threshold_noise_multiplier = 6.0;
    double threshold_peak_fraction = 0.1;
    double backtrack_fraction = 0.5;
    // Pulse bandwidth, used to convert the detected edge back to the path
    // delay (the edge precedes the pulse peak by a fixed rise time).
    double bandwidth = 499.2e6;

    void validate() const;
};

struct RangeMeasurement
{
    int anchor_id = 0;
    double range = 0.0; // m
    bool valid = false;
};

/// Time from the backtrack_fraction crossing of the pulse to its peak.
double leading_edge_offset(const LdeConfig &cfg);

/// First-path range from one profile. `valid` is false when no tap exceeds
/// the detection threshold.
RangeMeasurement lde_first_path(const CirProfile &profile, const LdeConfig &cfg);

/// Gauss-Newton least squares on the valid measurements, started from the
/// centroid of the anchors involved. Throws std::invalid_argument with fewer
/// than three valid measurements or collinear anchors.
Point2D trilaterate(std::span<const RangeMeasurement> measurements, std::span<const Anchor> anchors);

struct BaselineConfig
{
    TrackerConfig tracker = [] {
        TrackerConfig t;
        t.num_particles = 1000;
        return t;
    }();
    double range_std = 0.3; // m

    void validate() const;
};

struct RangeEpoch
{
    double dt = 0.0; // s since the previous epoch; ignored for the first
    std::vector<RangeMeasurement> measurements;
};

class RangeParticleFilter
{
  public:
    RangeParticleFilter(std::vector<Anchor> anchors, BaselineConfig cfg);

    void initialize(const Point2D &first_fix);
    bool initialized() const { return initialized_; }

    TagState update(std::span<const RangeMeasurement> measurements);
    TagState step(std::span<const RangeMeasurement> measurements, double dt);

    const ParticleSet &particles() const { return particles_; }
    ParticleSet &particles() { return particles_; }

    /// Log range likelihood of one position; exposed for tests.
    double log_likelihood(const Point2D &p, std::span<const RangeMeasurement> measurements) const;

  private:
    std::vector<Anchor> anchors_;
    BaselineConfig cfg_;
    Rng rng_;
    ParticleSet particles_;
    bool initialized_ = false;
};

/// Runs the range filter over a stream, initialized by trilateration of the
/// first epoch. Throws std::invalid_argument on an empty stream or when the
/// first epoch cannot be trilaterated.
std::vector<TagState> baseline_track(std::span<const RangeEpoch> stream, std::span<const Anchor> anchors,
                                     const BaselineConfig &cfg);

} // namespace smtrack

#endif
