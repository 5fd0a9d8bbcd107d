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

#ifndef SMTRACK_CHANNEL_HPP
#define SMTRACK_CHANNEL_HPP

#include "smtrack/geometry.hpp"
#include "smtrack/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace smtrack
{
enum class PathKind
{
    LoS,
    Smc
};

struct PathSource
{
    int physical_anchor_id = 0;
    int reflector_id = 0;
};

// One deterministic propagation path: LoS or a first-order specular reflection.
struct PathComponent
{
    PathKind kind = PathKind::LoS;
    double delay = 0.0;     // s
    double amplitude = 0.0; // linear magnitude
    std::optional<PathSource> source;
};

// Channel synthesis parameters. Defaults model a DW1000-like receiver
// (499.2 MHz bandwidth, ~1 ns accumulator taps, 1016 taps).
struct ChannelConfig
{
    double bandwidth = 499.2e6;        // Hz
    double tap_spacing = 1.0016e-9;    // s
    int num_taps = 1016;
    double reference_gain_at_1m = 1.0; // linear amplitude
    double path_loss_exponent = 2.0;
    double reflection_loss = 0.6;      // amplitude factor per bounce, (0,1]
    double dmc_onset_power = 0.02;     // relative to the strongest path power
    double dmc_decay_constant = 15e-9; // s
    double noise_floor_power = 1e-6;   // absolute, per tap
    bool check_reflected_blockage = false;
    std::uint64_t rng_seed = 1;

    void validate() const;
    double window() const { return num_taps * tap_spacing; }
};

// Discretized amplitude-delay profile |h(tau)| of one anchor-tag link.
struct CirProfile
{
    int anchor_id = 0;
    double timestamp = 0.0;   // s
    double tap_spacing = 0.0; // s
    std::vector<double> taps; // taps[k] = |h(k * tap_spacing)|

    friend bool operator==(const CirProfile &, const CirProfile &) = default;
};

/// Unit-peak raised-cosine-windowed sinc with two-sided support 8 / bandwidth.
double pulse_shape(double t, double bandwidth);

/// Half the support of pulse_shape, in seconds.
inline double pulse_half_support(double bandwidth) { return 4.0 / bandwidth; }

/// LoS (unless blocked by an obstacle) plus one specular component per
/// reflector with a valid first-order reflection point.
std::vector<PathComponent> enumerate_paths(const Point2D &tag, const Anchor &anchor, const FloorPlan &plan,
                                           const ChannelConfig &cfg);

/// Synthesizes |sum_l a_l e^{j phi_l} p(tau - tau_l) + nu(tau)| on the tap grid.
/// Phases are drawn uniformly per component in list order, then the complex
/// Gaussian stochastic part per tap. Throws std::invalid_argument when a
/// component delay lies outside the profile window.
CirProfile synthesize_cir(std::span<const PathComponent> components, const ChannelConfig &cfg, Rng &rng,
                          int anchor_id = 0, double timestamp = 0.0);

} // namespace smtrack

#endif
