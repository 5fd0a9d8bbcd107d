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

#ifndef SMTRACK_LIKELIHOOD_HPP
#define SMTRACK_LIKELIHOOD_HPP

// Soft ranging information taken directly from amplitude-delay profiles.
//
// Particles are mapped to delays (one per physical or virtual anchor), the
// profile is resampled at those delays, and the per-link samples are mapped
// back onto the particles as a location likelihood.

#include "smtrack/channel.hpp"
#include "smtrack/geometry.hpp"

#include <cstddef>
#include <vector>

namespace smtrack
{
struct LikelihoodConfig
{
    double neighborhood_radius = 4.0 * 1.0016e-9; // s, window half-width for truncated_pdf
    double floor_probability = 1e-3;              // lower bound on a normalized link value
    bool use_smc = true;                          // include virtual-anchor links

    void validate() const;
};

/// Linear interpolation of the tap magnitudes at `delay`; 0 past the last tap.
/// Throws std::invalid_argument for a negative delay.
double sample_profile(const CirProfile &profile, double delay);

// Profile restricted to |tau - center| < epsilon and normalized to unit mass.
class TruncatedPdf
{
  public:
    TruncatedPdf(const CirProfile &profile, double center, double epsilon);

    double operator()(double delay) const;

    double center() const { return center_; }
    double epsilon() const { return epsilon_; }
    double window_mass() const { return mass_; }
    bool is_uniform_fallback() const { return uniform_; }

  private:
    const CirProfile *profile_;
    double center_;
    double epsilon_;
    double mass_ = 0.0;
    bool uniform_ = false;
};

/// Throws std::invalid_argument when epsilon <= 0. The returned object keeps a
/// reference to `profile`.
TruncatedPdf truncated_pdf(const CirProfile &profile, double center_delay, double epsilon);

/// Profile magnitude at the delay implied by a particle and a (virtual) anchor.
double particle_link_likelihood(const CirProfile &profile, const Point2D &particle_position,
                                const Point2D &anchor_or_va_position);

// Raw link samples for a particle set, link-major.
class LinkSamples
{
  public:
    LinkSamples() = default;
    LinkSamples(std::size_t num_particles, std::size_t num_links)
        : particles_(num_particles), links_(num_links), values_(num_particles * num_links, 0.0)
    {
    }

    std::size_t num_particles() const { return particles_; }
    std::size_t num_links() const { return links_; }
    double &at(std::size_t link, std::size_t particle) { return values_[link * particles_ + particle]; }
    double at(std::size_t link, std::size_t particle) const { return values_[link * particles_ + particle]; }

  private:
    std::size_t particles_ = 0;
    std::size_t links_ = 0;
    std::vector<double> values_;
};

/// Location likelihood per particle, in (0, 1] with maximum exactly 1.
///
/// Each link is normalized by its maximum over the particle set and floored
/// at floor_probability; links are multiplied in the log domain, then the
/// result is rescaled across particles. Throws std::invalid_argument when
/// there are no particles or no links.
std::vector<double> combine_particle_likelihood(const LinkSamples &raw, const LikelihoodConfig &cfg);

} // namespace smtrack

#endif
