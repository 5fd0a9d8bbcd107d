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
#include "smtrack/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace smtrack;

namespace
{
const Reflector kVertical{1, {5.0, -10.0}, {5.0, 10.0}};
const Reflector kHorizontal{2, {-10.0, 0.0}, {10.0, 0.0}};

Obstacle square(int id, double x0, double y0, double x1, double y1)
{
    return {id, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

Point2D random_point(Rng &g, double span = 20.0)
{
    std::uniform_real_distribution<double> u(-span, span);
    return {u(g), u(g)};
}
} // namespace

TEST(MirrorAnchor, AcrossVerticalLine)
{
    const Point2D m = mirror_anchor({0.0, 0.0}, kVertical);
    EXPECT_NEAR(m.x, 10.0, 1e-12);
    EXPECT_NEAR(m.y, 0.0, 1e-12);
}

TEST(MirrorAnchor, AcrossHorizontalLine)
{
    const Point2D m = mirror_anchor({1.0, 2.0}, kHorizontal);
    EXPECT_NEAR(m.x, 1.0, 1e-12);
    EXPECT_NEAR(m.y, -2.0, 1e-12);
}

TEST(MirrorAnchor, PointOnLineIsFixed)
{
    const Point2D m = mirror_anchor({5.0, 3.0}, kVertical);
    EXPECT_NEAR(m.x, 5.0, 1e-12);
    EXPECT_NEAR(m.y, 3.0, 1e-12);
}

TEST(MirrorAnchor, ObliqueLine)
{
    // y = x
    const Reflector diag{3, {0.0, 0.0}, {1.0, 1.0}};
    const Point2D m = mirror_anchor({3.0, 1.0}, diag);
    EXPECT_NEAR(m.x, 1.0, 1e-12);
    EXPECT_NEAR(m.y, 3.0, 1e-12);
}

TEST(MirrorAnchor, DegenerateReflectorThrows)
{
    const Reflector r{1, {2.0, 2.0}, {2.0, 2.0}};
    EXPECT_THROW(mirror_anchor({0.0, 0.0}, r), std::invalid_argument);
}

TEST(MirrorAnchor, RandomInvolutionAndIsometry)
{
    Rng g(7);
    for (int i = 0; i < 2000; ++i)
    {
        const Reflector r{1, random_point(g), random_point(g)};
        if (r.length() < 1e-3)
            continue;
        const Point2D p = random_point(g);
        const Point2D q = random_point(g);
        const Point2D mp = mirror_anchor(p, r);
        const Point2D back = mirror_anchor(mp, r);
        EXPECT_LT(distance(back, p), 1e-12);
        EXPECT_NEAR(distance(p, q), distance(mp, mirror_anchor(q, r)), 1e-12);
    }
}

TEST(SpecularPoint, ExampleCrossing)
{
    const VirtualAnchor va{0, 1, {10.0, 0.0}};
    const auto s = specular_reflection_point({0.0, 4.0}, va, kVertical);
    ASSERT_TRUE(s.has_value());
    EXPECT_NEAR(s->x, 5.0, 1e-12);
    EXPECT_NEAR(s->y, 2.0, 1e-12);
}

TEST(SpecularPoint, SameSideIsAbsent)
{
    const VirtualAnchor va{0, 1, {10.0, 0.0}};
    EXPECT_FALSE(specular_reflection_point({10.0, 4.0}, va, kVertical).has_value());
}

TEST(SpecularPoint, TagOnVirtualAnchorIsAbsent)
{
    const VirtualAnchor va{0, 1, {10.0, 0.0}};
    EXPECT_FALSE(specular_reflection_point({10.0, 0.0}, va, kVertical).has_value());
}

TEST(SpecularPoint, OutsideFiniteSegmentIsAbsent)
{
    const Reflector shortwall{1, {5.0, -1.0}, {5.0, 1.0}};
    const VirtualAnchor va{0, 1, {10.0, 0.0}};
    // crossing at y = 2 lies beyond the segment end
    EXPECT_FALSE(specular_reflection_point({0.0, 4.0}, va, shortwall).has_value());
}

TEST(SpecularPoint, EndpointHitIsAbsent)
{
    const Reflector r{1, {5.0, 2.0}, {5.0, 10.0}};
    const VirtualAnchor va{0, 1, {10.0, 0.0}};
    EXPECT_FALSE(specular_reflection_point({0.0, 4.0}, va, r).has_value());
}

TEST(SpecularPoint, RandomImagePathLengthIdentity)
{
    Rng g(11);
    int valid = 0;
    for (int i = 0; i < 4000; ++i)
    {
        const Reflector r{1, random_point(g), random_point(g)};
        if (r.length() < 1e-2)
            continue;
        const Point2D anchor = random_point(g);
        const Point2D tag = random_point(g);
        const VirtualAnchor va{0, 1, mirror_anchor(anchor, r)};
        const auto s = specular_reflection_point(tag, va, r);
        if (!s)
            continue;
        ++valid;
        EXPECT_NEAR(distance(anchor, *s) + distance(*s, tag), distance(va.position, tag), 1e-9);
    }
    EXPECT_GT(valid, 200);
}

TEST(LosBlocked, Examples)
{
    const std::vector<Obstacle> through{square(1, 4.0, -1.0, 6.0, 1.0)};
    const std::vector<Obstacle> apart{square(1, 4.0, 2.0, 6.0, 4.0)};
    EXPECT_TRUE(los_blocked({0.0, 0.0}, {10.0, 0.0}, through));
    EXPECT_FALSE(los_blocked({0.0, 0.0}, {10.0, 0.0}, apart));
    EXPECT_TRUE(los_blocked({5.0, 0.0}, {20.0, 0.0}, through));
    EXPECT_TRUE(los_blocked({4.5, 0.0}, {5.5, 0.5}, through)); // both ends inside
    EXPECT_FALSE(los_blocked({0.0, 0.0}, {10.0, 0.0}, {}));
}

TEST(LosBlocked, RandomSymmetry)
{
    Rng g(3);
    const std::vector<Obstacle> obs{square(1, -2.0, -2.0, 2.0, 2.0), {2, {{5.0, 5.0}, {9.0, 6.0}, {6.0, 9.0}}}};
    for (int i = 0; i < 3000; ++i)
    {
        const Point2D a = random_point(g, 12.0);
        const Point2D b = random_point(g, 12.0);
        EXPECT_EQ(los_blocked(a, b, obs), los_blocked(b, a, obs));
    }
}

TEST(PathDelay, Examples)
{
    EXPECT_EQ(path_delay({0.0, 0.0}, {0.0, 0.0}), 0.0);
    EXPECT_NEAR(path_delay({0.0, 0.0}, {299.792458, 0.0}), 1.0e-6, 1e-18);
    EXPECT_NEAR(path_delay({0.0, 0.0}, {3.0, 4.0}), 1.66782e-8, 1e-13);
}

TEST(Primitives, SegmentsAndPolygon)
{
    EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
    EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0})); // collinear overlap
    const std::vector<Point2D> tri{{0, 0}, {4, 0}, {0, 4}};
    EXPECT_TRUE(point_in_polygon({1, 1}, tri));
    EXPECT_FALSE(point_in_polygon({3, 3}, tri));
}

TEST(FloorPlan, VirtualAnchorsAnchorsOuter)
{
    FloorPlan plan;
    plan.anchors = {{1, {0.0, 0.0}}, {2, {2.0, 1.0}}};
    plan.reflectors = {kVertical, kHorizontal};
    const auto vas = plan.virtual_anchors();
    ASSERT_EQ(vas.size(), 4u);
    EXPECT_EQ(vas[0].physical_anchor_id, 1);
    EXPECT_EQ(vas[0].reflector_id, 1);
    EXPECT_EQ(vas[1].physical_anchor_id, 1);
    EXPECT_EQ(vas[1].reflector_id, 2);
    EXPECT_EQ(vas[2].physical_anchor_id, 2);
    EXPECT_NEAR(vas[3].position.y, -1.0, 1e-12);
}

TEST(FloorPlan, ValidateRejectsBadInput)
{
    FloorPlan dup;
    dup.anchors = {{1, {0, 0}}, {1, {1, 1}}};
    EXPECT_THROW(dup.validate(), std::invalid_argument);

    FloorPlan zero;
    zero.anchors = {{1, {0, 0}}};
    zero.reflectors = {{1, {1, 1}, {1, 1}}};
    EXPECT_THROW(zero.validate(), std::invalid_argument);

    FloorPlan nan;
    nan.anchors = {{1, {std::numeric_limits<double>::quiet_NaN(), 0}}};
    EXPECT_THROW(nan.validate(), std::invalid_argument);

    FloorPlan bowtie;
    bowtie.anchors = {{1, {0, 0}}};
    bowtie.obstacles = {{1, {{0, 0}, {2, 2}, {2, 0}, {0, 2}}}};
    EXPECT_THROW(bowtie.validate(), std::invalid_argument);

    FloorPlan two;
    two.anchors = {{1, {0, 0}}};
    two.obstacles = {{1, {{0, 0}, {2, 2}}}};
    EXPECT_THROW(two.validate(), std::invalid_argument);

    FloorPlan ok;
    ok.anchors = {{1, {0, 0}}, {2, {5, 0}}};
    ok.reflectors = {kVertical};
    ok.obstacles = {square(1, 1, 1, 2, 2)};
    EXPECT_NO_THROW(ok.validate());
    EXPECT_NE(ok.find_anchor(2), nullptr);
    EXPECT_EQ(ok.find_anchor(3), nullptr);
    EXPECT_NE(ok.find_reflector(1), nullptr);
}
