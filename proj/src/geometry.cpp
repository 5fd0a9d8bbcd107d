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

#include "smtrack/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace smtrack
{
namespace
{
// Tolerance on the reflector parameter, keeps reflection points strictly
// inside the segment.
constexpr double kSegmentInteriorTol = 1e-12;

int orientation(const Point2D &a, const Point2D &b, const Point2D &c)
{
    const double v = cross(b - a, c - a);
    if (v > 0.0)
        return 1;
    if (v < 0.0)
        return -1;
    return 0;
}

bool on_segment(const Point2D &a, const Point2D &b, const Point2D &p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool lex_less(const Point2D &a, const Point2D &b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

template <typename T> void check_unique_ids(const std::vector<T> &items, const char *what)
{
    std::set<int> seen;
    for (const auto &item : items)
        if (!seen.insert(item.id).second)
            throw std::invalid_argument(std::string("duplicate ") + what + " id " + std::to_string(item.id));
}
} // namespace

bool segments_intersect(const Point2D &p1, const Point2D &p2, const Point2D &q1, const Point2D &q2)
{
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);

    if (o1 != o2 && o3 != o4)
        return true;
    if (o1 == 0 && on_segment(p1, p2, q1))
        return true;
    if (o2 == 0 && on_segment(p1, p2, q2))
        return true;
    if (o3 == 0 && on_segment(q1, q2, p1))
        return true;
    if (o4 == 0 && on_segment(q1, q2, p2))
        return true;
    return false;
}

bool point_in_polygon(const Point2D &p, std::span<const Point2D> polygon)
{
    bool inside = false;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    {
        const Point2D &a = polygon[i];
        const Point2D &b = polygon[j];
        if ((a.y > p.y) != (b.y > p.y))
        {
            const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_cross)
                inside = !inside;
        }
    }
    return inside;
}

void FloorPlan::validate() const
{
    check_unique_ids(anchors, "anchor");
    check_unique_ids(reflectors, "reflector");
    check_unique_ids(obstacles, "obstacle");

    for (const auto &a : anchors)
        if (!is_finite(a.position))
            throw std::invalid_argument("anchor " + std::to_string(a.id) + " has a non-finite position");

    for (const auto &r : reflectors)
    {
        if (!is_finite(r.endpoint_a) || !is_finite(r.endpoint_b))
            throw std::invalid_argument("reflector " + std::to_string(r.id) + " has a non-finite endpoint");
        if (!(r.length() > 0.0))
            throw std::invalid_argument("reflector " + std::to_string(r.id) + " has zero length");
    }

    for (const auto &o : obstacles)
    {
        const auto &poly = o.polygon;
        const std::size_t n = poly.size();
        if (n < 3)
            throw std::invalid_argument("obstacle " + std::to_string(o.id) + " needs at least 3 vertices");
        for (const auto &v : poly)
            if (!is_finite(v))
                throw std::invalid_argument("obstacle " + std::to_string(o.id) + " has a non-finite vertex");
        // non-adjacent edges must not touch
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t j = i + 1; j < n; ++j)
            {
                const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
                if (adjacent)
                    continue;
                if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                    throw std::invalid_argument("obstacle " + std::to_string(o.id) + " is not a simple polygon");
            }
        }
    }
}

const Anchor *FloorPlan::find_anchor(int id) const
{
    auto it = std::find_if(anchors.begin(), anchors.end(), [id](const Anchor &a) { return a.id == id; });
    return it == anchors.end() ? nullptr : &*it;
}

const Reflector *FloorPlan::find_reflector(int id) const
{
    auto it = std::find_if(reflectors.begin(), reflectors.end(), [id](const Reflector &r) { return r.id == id; });
    return it == reflectors.end() ? nullptr : &*it;
}

std::vector<VirtualAnchor> FloorPlan::virtual_anchors() const
{
    std::vector<VirtualAnchor> out;
    out.reserve(anchors.size() * reflectors.size());
    for (const auto &a : anchors)
        for (const auto &r : reflectors)
            out.push_back({a.id, r.id, mirror_anchor(a.position, r)});
    return out;
}

Point2D mirror_anchor(const Point2D &anchor, const Reflector &reflector)
{
    const Vec2 dir = reflector.endpoint_b - reflector.endpoint_a;
    const double len2 = dot(dir, dir);
    if (!(len2 > 0.0))
        throw std::invalid_argument("mirror_anchor: degenerate reflector " + std::to_string(reflector.id));

    // foot of the perpendicular, then step the same distance again
    const double t = dot(anchor - reflector.endpoint_a, dir) / len2;
    const Point2D foot = reflector.endpoint_a + dir * t;
    return foot * 2.0 - anchor;
}

std::optional<Point2D> specular_reflection_point(const Point2D &tag, const VirtualAnchor &virtual_anchor,
                                                 const Reflector &reflector)
{
    const Vec2 path = tag - virtual_anchor.position;
    const Vec2 seg = reflector.endpoint_b - reflector.endpoint_a;
    if (dot(path, path) == 0.0)
        return std::nullopt;

    const double denom = cross(path, seg);
    if (denom == 0.0)
        return std::nullopt;

    const Vec2 rel = reflector.endpoint_a - virtual_anchor.position;
    const double t = cross(rel, seg) / denom;  // along the path
    const double u = cross(rel, path) / denom; // along the reflector
    if (!(t > 0.0 && t <= 1.0))
        return std::nullopt;
    if (!(u > kSegmentInteriorTol && u < 1.0 - kSegmentInteriorTol))
        return std::nullopt;
    return reflector.endpoint_a + seg * u;
}

bool los_blocked(const Point2D &a, const Point2D &b, std::span<const Obstacle> obstacles)
{
    // canonical endpoint order makes the predicate exactly symmetric
    const auto [p, q] = lex_less(b, a) ? std::pair{b, a} : std::pair{a, b};
    for (const auto &o : obstacles)
    {
        const auto &poly = o.polygon;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i)
            if (segments_intersect(p, q, poly[i], poly[(i + 1) % n]))
                return true;
        if (point_in_polygon(p, poly) || point_in_polygon(q, poly))
            return true;
    }
    return false;
}

} // namespace smtrack
