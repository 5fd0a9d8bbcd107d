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

#ifndef SMTRACK_GEOMETRY_HPP
#define SMTRACK_GEOMETRY_HPP

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace smtrack
{
inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s

// 2-D vector in meters (positions) or m/s (velocities)
struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 &operator+=(const Vec2 &o)
    {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2 &operator-=(const Vec2 &o)
    {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    constexpr Vec2 &operator*=(double s)
    {
        x *= s;
        y *= s;
        return *this;
    }
    friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

using Point2D = Vec2;

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2D &a, const Point2D &b) { return norm(a - b); }
inline bool is_finite(const Vec2 &a) { return std::isfinite(a.x) && std::isfinite(a.y); }

struct Anchor
{
    int id = 0;
    Point2D position;
};

// Planar reflector, modelled as a finite segment.
struct Reflector
{
    int id = 0;
    Point2D endpoint_a;
    Point2D endpoint_b;

    double length() const { return distance(endpoint_a, endpoint_b); }
};

// Simple polygon that blocks line-of-sight propagation.
struct Obstacle
{
    int id = 0;
    std::vector<Point2D> polygon;
};

// Mirror image of a physical anchor across one reflector.
struct VirtualAnchor
{
    int physical_anchor_id = 0;
    int reflector_id = 0;
    Point2D position;
};

struct FloorPlan
{
    std::vector<Anchor> anchors;
    std::vector<Reflector> reflectors;
    std::vector<Obstacle> obstacles;

    /// Throws std::invalid_argument on duplicate ids, non-finite coordinates,
    /// zero-length reflectors or malformed obstacle polygons.
    void validate() const;

    const Anchor *find_anchor(int id) const;
    const Reflector *find_reflector(int id) const;

    /// One virtual anchor per (anchor, reflector) pair, anchors outer.
    std::vector<VirtualAnchor> virtual_anchors() const;
};

/// Reflection of `anchor` across the infinite line through the reflector.
/// Throws std::invalid_argument for a zero-length reflector.
Point2D mirror_anchor(const Point2D &anchor, const Reflector &reflector);

/// Point where the image-method path from `virtual_anchor` to `tag` meets the
/// reflector. Empty when the crossing falls outside the open segment, when the
/// path is parallel to the reflector, or when the tag sits on the virtual
/// anchor.
std::optional<Point2D> specular_reflection_point(const Point2D &tag, const VirtualAnchor &virtual_anchor,
                                                 const Reflector &reflector);

/// True iff segment (a, b) touches an obstacle edge or lies inside an obstacle.
bool los_blocked(const Point2D &a, const Point2D &b, std::span<const Obstacle> obstacles);

/// Propagation delay in seconds of the straight path a -> b.
inline double path_delay(const Point2D &a, const Point2D &b) { return distance(a, b) / kSpeedOfLight; }

// Exposed for tests.
bool segments_intersect(const Point2D &p1, const Point2D &p2, const Point2D &q1, const Point2D &q2);
bool point_in_polygon(const Point2D &p, std::span<const Point2D> polygon);

} // namespace smtrack

#endif
